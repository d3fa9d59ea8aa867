#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "kqd/pauli.hpp"

namespace kqd {

enum class EdgeColor : std::uint8_t { R = 0, G = 1, B = 2 };

char color_char(EdgeColor c);
EdgeColor color_from_char(char c);

struct Edge {
  int a = 0, b = 0;  // a < b
  bool operator==(const Edge&) const = default;
};

// Interaction graph with couplings and a proper edge three-coloring.
// Immutable after construction; shared freely across threads.
class EdgeColoredLattice {
public:
  EdgeColoredLattice() = default;
  EdgeColoredLattice(int n_sites, std::vector<Edge> edges,
                     std::vector<double> coupling, std::vector<EdgeColor> color);

  int n_sites() const { return n_sites_; }
  int n_edges() const { return static_cast<int>(edges_.size()); }
  const std::vector<Edge>& edges() const { return edges_; }
  const Edge& edge(int e) const { return edges_[e]; }
  double coupling(int e) const { return coupling_[e]; }
  EdgeColor color(int e) const { return color_[e]; }

  const std::vector<int>& neighbors(int site) const { return adj_[site]; }
  int degree(int site) const { return static_cast<int>(adj_[site].size()); }
  std::optional<int> edge_index(int a, int b) const;
  bool adjacent(int a, int b) const { return edge_index(a, b).has_value(); }

  std::vector<int> edges_of_color(EdgeColor c) const;

  bool connected() const;
  // BFS distances from a site; -1 where unreachable.
  std::vector<int> distances_from(int site) const;
  int distance(int a, int b) const;

private:
  void validate() const;
  void build_adjacency();

  int n_sites_ = 0;
  std::vector<Edge> edges_;
  std::vector<double> coupling_;
  std::vector<EdgeColor> color_;
  std::vector<std::vector<int>> adj_;
};

// Grid coordinates of a generated heavy-hex site, kept for subset selection
// and pretty output.
struct HeavyHexCoord {
  int row = 0;
  int col = 0;
  bool rung = false;  // true: connector between chain rows `row` and `row`+1
};

struct HeavyHex {
  EdgeColoredLattice lattice;
  std::vector<HeavyHexCoord> coords;
};

// rows x cols hexagonal plaquettes; every site has degree <= 3 and the edge
// coloring is the canonical one derived from the underlying honeycomb.
HeavyHex build_heavy_hex(int rows, int cols);

struct Sublattice {
  EdgeColoredLattice lattice;
  std::vector<int> new_to_old;  // new site -> site in the parent lattice
  std::vector<int> old_to_new;  // -1 where dropped
  bool connected = true;
  std::string warning;  // non-empty when the result is disconnected
};

Sublattice induced_sublattice(const EdgeColoredLattice& lat,
                              const std::vector<int>& sites);

// 3|E| terms J_ij {XX, YY, ZZ} ordered by color class (R, G, B), then by edge
// index, then X, Y, Z.
std::vector<PauliTerm> hamiltonian_terms(const EdgeColoredLattice& lat);
std::array<std::vector<PauliTerm>, 3> hamiltonian_terms_by_color(
    const EdgeColoredLattice& lat);

// Terms on edges that do not touch `excluded_site` (the auxiliary qubit).
std::vector<PauliTerm> hamiltonian_terms_excluding(
    const EdgeColoredLattice& lat, int excluded_site);

// Same sites, with every edge incident to `site` removed.
EdgeColoredLattice drop_edges_at(const EdgeColoredLattice& lat, int site);

}  // namespace kqd
