#pragma once

#include <algorithm>
#include <vector>

#include "kqd/circuit.hpp"
#include "kqd/dense_state.hpp"
#include "kqd/errors.hpp"
#include "kqd/krylov.hpp"
#include "kqd/lattice.hpp"
#include "kqd/prep.hpp"
#include "kqd/rng.hpp"

namespace kqd::test {

// Random connected induced subgraph of a heavy-hex lattice, grown site by
// site from a random seed.
inline EdgeColoredLattice random_heavy_hex_subgraph(Rng& rng, int max_sites,
                                                    int rows = 2, int cols = 2) {
  HeavyHex hh = build_heavy_hex(rows, cols);
  const EdgeColoredLattice& lat = hh.lattice;
  std::vector<int> chosen{static_cast<int>(uniform_index(rng, lat.n_sites()))};
  std::vector<char> in(lat.n_sites(), 0);
  in[chosen[0]] = 1;
  while (static_cast<int>(chosen.size()) < max_sites) {
    std::vector<int> frontier;
    for (int s : chosen)
      for (int nb : lat.neighbors(s))
        if (!in[nb]) frontier.push_back(nb);
    if (frontier.empty()) break;
    int pick = frontier[uniform_index(rng, frontier.size())];
    in[pick] = 1;
    chosen.push_back(pick);
  }
  std::sort(chosen.begin(), chosen.end());
  return induced_sublattice(lat, chosen).lattice;
}

// Pairwise non-adjacent particles; returns fewer than k when the graph
// cannot host more.
inline std::vector<int> random_nonadjacent_particles(Rng& rng,
                                                     const EdgeColoredLattice& lat,
                                                     int k) {
  std::vector<int> order(lat.n_sites());
  for (int i = 0; i < lat.n_sites(); ++i) order[i] = i;
  for (int i = lat.n_sites() - 1; i > 0; --i)
    std::swap(order[i], order[uniform_index(rng, i + 1)]);
  std::vector<int> picked;
  for (int s : order) {
    if (static_cast<int>(picked.size()) == k) break;
    bool ok = true;
    for (int p : picked)
      if (lat.adjacent(s, p)) ok = false;
    if (ok) picked.push_back(s);
  }
  std::sort(picked.begin(), picked.end());
  return picked;
}

struct RandomInstance {
  EdgeColoredLattice lattice;
  PreparationTarget target;
};

// Lattice plus a centrally placed control and k non-adjacent particles; k
// shrinks when the graph is too small.
inline RandomInstance random_instance(Rng& rng, int max_sites, int k,
                                      int rows = 2, int cols = 2) {
  for (;;) {
    EdgeColoredLattice lat = random_heavy_hex_subgraph(rng, max_sites, rows, cols);
    if (lat.n_sites() < 3) continue;
    int want = std::min<int>(k, std::max(1, lat.n_sites() / 3));
    auto particles = random_nonadjacent_particles(rng, lat, want);
    if (particles.empty() ||
        static_cast<int>(particles.size()) == lat.n_sites())
      continue;
    PreparationTarget t;
    try {
      t.control = choose_control_site(lat, particles);
    } catch (const ValidationError&) {
      continue;
    }
    t.particles = particles;
    return {std::move(lat), std::move(t)};
  }
}

// Dense unitary of a layered circuit, column by column.
inline Eigen::MatrixXcd circuit_unitary(const LayeredCircuit& circ) {
  const Eigen::Index dim = 1ll << circ.n_sites;
  Eigen::MatrixXcd u(dim, dim);
  for (Eigen::Index c = 0; c < dim; ++c) {
    DenseState st = DenseState::basis_state(circ.n_sites,
                                            static_cast<std::uint64_t>(c));
    apply_circuit(st, circ);
    u.col(c) = st.amplitudes();
  }
  return u;
}

// The two-hexagon (20+1)-qubit layout used by the numerics: middle connector
// as the control, five spread-out particles.
inline ExperimentLayout numerics_layout_20q() {
  HeavyHex hh = build_heavy_hex(1, 2);
  PreparationTarget t;
  t.control = 10;
  t.particles = {1, 5, 11, 13, 17};
  return ExperimentLayout::make(hh.lattice, t);
}

}  // namespace kqd::test
