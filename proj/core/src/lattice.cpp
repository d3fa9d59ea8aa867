#include "kqd/lattice.hpp"

#include <algorithm>
#include <deque>
#include <map>

#include "kqd/errors.hpp"

namespace kqd {

char color_char(EdgeColor c) {
  switch (c) {
    case EdgeColor::R: return 'R';
    case EdgeColor::G: return 'G';
    case EdgeColor::B: return 'B';
  }
  return '?';
}

EdgeColor color_from_char(char c) {
  switch (c) {
    case 'R': return EdgeColor::R;
    case 'G': return EdgeColor::G;
    case 'B': return EdgeColor::B;
    default: throw ValidationError(std::string("invalid edge color: ") + c);
  }
}

EdgeColoredLattice::EdgeColoredLattice(int n_sites, std::vector<Edge> edges,
                                       std::vector<double> coupling,
                                       std::vector<EdgeColor> color)
    : n_sites_(n_sites),
      edges_(std::move(edges)),
      coupling_(std::move(coupling)),
      color_(std::move(color)) {
  for (auto& e : edges_)
    if (e.a > e.b) std::swap(e.a, e.b);
  validate();
  build_adjacency();
}

void EdgeColoredLattice::validate() const {
  if (n_sites_ <= 0) throw ValidationError("lattice: n_sites must be positive");
  if (edges_.size() != coupling_.size() || edges_.size() != color_.size())
    throw ValidationError("lattice: edges/coupling/color size mismatch");
  std::vector<std::array<bool, 3>> used(n_sites_, {false, false, false});
  std::vector<Edge> seen;
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    const Edge& ed = edges_[e];
    if (ed.a < 0 || ed.b >= n_sites_ || ed.a == ed.b)
      throw ValidationError("lattice: edge out of range or self-loop");
    seen.push_back(ed);
    int c = static_cast<int>(color_[e]);
    if (used[ed.a][c] || used[ed.b][c])
      throw ValidationError("lattice: color class is not a matching at site " +
                            std::to_string(used[ed.a][c] ? ed.a : ed.b));
    used[ed.a][c] = used[ed.b][c] = true;
  }
  std::sort(seen.begin(), seen.end(),
            [](const Edge& x, const Edge& y) { return std::tie(x.a, x.b) < std::tie(y.a, y.b); });
  if (std::adjacent_find(seen.begin(), seen.end()) != seen.end())
    throw ValidationError("lattice: duplicate edge");
}

void EdgeColoredLattice::build_adjacency() {
  adj_.assign(n_sites_, {});
  for (const Edge& e : edges_) {
    adj_[e.a].push_back(e.b);
    adj_[e.b].push_back(e.a);
  }
  for (auto& v : adj_) std::sort(v.begin(), v.end());
}

std::optional<int> EdgeColoredLattice::edge_index(int a, int b) const {
  if (a > b) std::swap(a, b);
  for (std::size_t e = 0; e < edges_.size(); ++e)
    if (edges_[e].a == a && edges_[e].b == b) return static_cast<int>(e);
  return std::nullopt;
}

std::vector<int> EdgeColoredLattice::edges_of_color(EdgeColor c) const {
  std::vector<int> out;
  for (int e = 0; e < n_edges(); ++e)
    if (color_[e] == c) out.push_back(e);
  return out;
}

bool EdgeColoredLattice::connected() const {
  if (n_sites_ == 0) return true;
  auto d = distances_from(0);
  return std::none_of(d.begin(), d.end(), [](int x) { return x < 0; });
}

std::vector<int> EdgeColoredLattice::distances_from(int site) const {
  std::vector<int> dist(n_sites_, -1);
  std::deque<int> q{site};
  dist[site] = 0;
  while (!q.empty()) {
    int u = q.front();
    q.pop_front();
    for (int v : adj_[u])
      if (dist[v] < 0) {
        dist[v] = dist[u] + 1;
        q.push_back(v);
      }
  }
  return dist;
}

int EdgeColoredLattice::distance(int a, int b) const {
  return distances_from(a)[b];
}

namespace {

EdgeColor sigma(EdgeColor c) {  // R -> G -> B -> R
  return static_cast<EdgeColor>((static_cast<int>(c) + 1) % 3);
}

// Half-edge color of a subdivided honeycomb edge: the half incident to the
// even (parity 0) corner keeps the honeycomb color, the other half is shifted
// by sigma. This is what makes each color class a matching on the heavy hex.
EdgeColor half_color(EdgeColor base, int corner_parity) {
  return corner_parity == 0 ? base : sigma(base);
}

}  // namespace

HeavyHex build_heavy_hex(int rows, int cols) {
  if (rows < 1 || cols < 1)
    throw ValidationError("build_heavy_hex: rows and cols must be >= 1");

  const int chain_len = 4 * cols + (rows > 1 ? 3 : 1);
  std::map<std::tuple<int, int, int>, int> id;  // (kind 0=chain,1=rung, row, col)
  std::vector<HeavyHexCoord> coords;
  auto add_site = [&](int kind, int r, int c) {
    id[{kind, r, c}] = static_cast<int>(coords.size());
    coords.push_back({r, c, kind == 1});
  };
  auto rung_cols = [&](int r) {
    std::vector<int> cs;
    for (int c = 2 * (r % 2); c < chain_len; c += 4) cs.push_back(c);
    return cs;
  };

  // row-major: chain row r, then the connectors below it
  for (int r = 0; r <= rows; ++r) {
    for (int c = 0; c < chain_len; ++c) add_site(0, r, c);
    if (r < rows)
      for (int c : rung_cols(r)) add_site(1, r, c);
  }

  auto corner_parity = [](int r, int c) { return (r + c / 2) % 2; };

  std::vector<Edge> edges;
  std::vector<EdgeColor> colors;
  for (int r = 0; r <= rows; ++r) {
    for (int c = 0; c + 1 < chain_len; ++c) {
      int u = id[{0, r, c}], v = id[{0, r, c + 1}];
      // honeycomb edge between corners at even columns ce and ce+2
      int ce = (c % 2 == 0) ? c : c - 1;
      EdgeColor base = ((ce / 2) % 2 == 0) ? EdgeColor::R : EdgeColor::G;
      int corner = (c % 2 == 0) ? c : c + 1;
      edges.push_back({u, v});
      colors.push_back(half_color(base, corner_parity(r, corner)));
    }
    if (r < rows) {
      for (int c : rung_cols(r)) {
        int m = id[{1, r, c}];
        int top = id[{0, r, c}], bot = id[{0, r + 1, c}];
        edges.push_back({std::min(top, m), std::max(top, m)});
        colors.push_back(half_color(EdgeColor::B, corner_parity(r, c)));
        edges.push_back({std::min(m, bot), std::max(m, bot)});
        colors.push_back(half_color(EdgeColor::B, corner_parity(r + 1, c)));
      }
    }
  }

  std::vector<double> coupling(edges.size(), 1.0);
  HeavyHex hh;
  hh.lattice = EdgeColoredLattice(static_cast<int>(coords.size()),
                                  std::move(edges), std::move(coupling),
                                  std::move(colors));
  hh.coords = std::move(coords);
  return hh;
}

Sublattice induced_sublattice(const EdgeColoredLattice& lat,
                              const std::vector<int>& sites) {
  if (sites.empty()) throw ValidationError("induced_sublattice: empty site set");
  std::vector<int> keep = sites;
  std::sort(keep.begin(), keep.end());
  keep.erase(std::unique(keep.begin(), keep.end()), keep.end());
  if (keep.front() < 0 || keep.back() >= lat.n_sites())
    throw ValidationError("induced_sublattice: site out of range");

  Sublattice out;
  out.new_to_old = keep;
  out.old_to_new.assign(lat.n_sites(), -1);
  for (std::size_t i = 0; i < keep.size(); ++i) out.old_to_new[keep[i]] = static_cast<int>(i);

  std::vector<Edge> edges;
  std::vector<double> coupling;
  std::vector<EdgeColor> colors;
  for (int e = 0; e < lat.n_edges(); ++e) {
    int a = out.old_to_new[lat.edge(e).a];
    int b = out.old_to_new[lat.edge(e).b];
    if (a >= 0 && b >= 0) {
      edges.push_back({a, b});
      coupling.push_back(lat.coupling(e));
      colors.push_back(lat.color(e));
    }
  }
  out.lattice = EdgeColoredLattice(static_cast<int>(keep.size()),
                                   std::move(edges), std::move(coupling),
                                   std::move(colors));
  if (!out.lattice.connected()) {
    out.connected = false;
    out.warning = "induced sublattice is disconnected";
  }
  return out;
}

namespace {
PauliTerm two_site_term(int n, int i, int j, PauliOp p, double coeff) {
  PauliTerm t;
  t.coefficient = coeff;
  t.op = PauliString(n);
  t.op.set_op(i, p);
  t.op.set_op(j, p);
  return t;
}
}  // namespace

std::array<std::vector<PauliTerm>, 3> hamiltonian_terms_by_color(
    const EdgeColoredLattice& lat) {
  std::array<std::vector<PauliTerm>, 3> groups;
  for (int e = 0; e < lat.n_edges(); ++e) {
    auto& g = groups[static_cast<int>(lat.color(e))];
    const Edge& ed = lat.edge(e);
    for (PauliOp p : {PauliOp::X, PauliOp::Y, PauliOp::Z})
      g.push_back(two_site_term(lat.n_sites(), ed.a, ed.b, p, lat.coupling(e)));
  }
  return groups;
}

std::vector<PauliTerm> hamiltonian_terms(const EdgeColoredLattice& lat) {
  auto groups = hamiltonian_terms_by_color(lat);
  std::vector<PauliTerm> out;
  for (auto& g : groups)
    for (auto& t : g) out.push_back(std::move(t));
  return out;
}

std::vector<PauliTerm> hamiltonian_terms_excluding(
    const EdgeColoredLattice& lat, int excluded_site) {
  std::vector<PauliTerm> out;
  for (auto& t : hamiltonian_terms(lat)) {
    auto sup = t.op.support();
    if (std::find(sup.begin(), sup.end(), excluded_site) == sup.end())
      out.push_back(std::move(t));
  }
  return out;
}

EdgeColoredLattice drop_edges_at(const EdgeColoredLattice& lat, int site) {
  std::vector<Edge> edges;
  std::vector<double> coupling;
  std::vector<EdgeColor> colors;
  for (int e = 0; e < lat.n_edges(); ++e) {
    if (lat.edge(e).a == site || lat.edge(e).b == site) continue;
    edges.push_back(lat.edge(e));
    coupling.push_back(lat.coupling(e));
    colors.push_back(lat.color(e));
  }
  return EdgeColoredLattice(lat.n_sites(), std::move(edges), std::move(coupling),
                            std::move(colors));
}

}  // namespace kqd
