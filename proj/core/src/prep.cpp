#include "kqd/prep.hpp"

#include <algorithm>
#include <deque>
#include <set>

#include "kqd/errors.hpp"

namespace kqd {

void validate_target(const EdgeColoredLattice& lat, const PreparationTarget& t) {
  if (t.control < 0 || t.control >= lat.n_sites())
    throw ValidationError("target: control site out of range");
  if (t.particles.empty())
    throw ValidationError("target: at least one particle required");
  if (!std::is_sorted(t.particles.begin(), t.particles.end()))
    throw ValidationError("target: particles must be sorted");
  for (std::size_t i = 0; i < t.particles.size(); ++i) {
    int p = t.particles[i];
    if (p < 0 || p >= lat.n_sites())
      throw ValidationError("target: particle site out of range");
    if (p == t.control)
      throw ValidationError("target: control cannot host a particle");
    if (i > 0 && p == t.particles[i - 1])
      throw ValidationError("target: duplicate particle site");
  }
  for (std::size_t i = 0; i < t.particles.size(); ++i)
    for (std::size_t j = i + 1; j < t.particles.size(); ++j)
      if (lat.adjacent(t.particles[i], t.particles[j]))
        throw ValidationError("target: adjacent particles at sites " +
                              std::to_string(t.particles[i]) + "," +
                              std::to_string(t.particles[j]));
  auto dist = lat.distances_from(t.control);
  for (int p : t.particles)
    if (dist[p] < 0)
      throw ValidationError("target: particle set disconnected from control");
}

int excitation_spread(const EdgeColoredLattice& lat, const PreparationTarget& t) {
  std::vector<int> ones = t.particles;
  ones.push_back(t.control);
  int spread = 0;
  for (int a : ones) {
    auto dist = lat.distances_from(a);
    for (int b : ones) spread = std::max(spread, dist[b]);
  }
  return spread;
}

int prep_layer_bound(int dist_exc) { return 3 * ((dist_exc + 1) / 2 + 2); }

namespace {

struct Tree {
  std::vector<int> parent;              // -1 at root / unused sites
  std::vector<std::vector<int>> children;
  std::vector<char> kept;
  std::vector<int> bfs_order;           // kept sites, root first
};

// Union of BFS shortest paths from the root to every marked site.
Tree shortest_path_tree(const EdgeColoredLattice& lat, int root,
                        const std::vector<char>& marked) {
  const int n = lat.n_sites();
  Tree tr;
  tr.parent.assign(n, -1);
  tr.children.assign(n, {});
  tr.kept.assign(n, 0);

  std::vector<int> dist(n, -1), par(n, -1);
  std::deque<int> q{root};
  dist[root] = 0;
  while (!q.empty()) {
    int u = q.front();
    q.pop_front();
    for (int v : lat.neighbors(u))  // ascending: lowest-index parents
      if (dist[v] < 0) {
        dist[v] = dist[u] + 1;
        par[v] = u;
        q.push_back(v);
      }
  }

  tr.kept[root] = 1;
  for (int s = 0; s < n; ++s) {
    if (!marked[s]) continue;
    for (int v = s; v != root; v = par[v]) tr.kept[v] = 1;
  }
  for (int v = 0; v < n; ++v)
    if (tr.kept[v] && v != root) {
      tr.parent[v] = par[v];
      tr.children[par[v]].push_back(v);
    }

  std::deque<int> bq{root};
  while (!bq.empty()) {
    int u = bq.front();
    bq.pop_front();
    tr.bfs_order.push_back(u);
    for (int v : tr.children[u]) bq.push_back(v);
  }
  return tr;
}

// One pass through the color layers turning every adjacent 1-1 pair into 1-0:
// the classical reduction whose inverse ends the circuit.
std::vector<CircuitLayer> sparse_reduction(const EdgeColoredLattice& lat,
                                           std::vector<char>& bits) {
  std::vector<CircuitLayer> layers;
  for (EdgeColor c : {EdgeColor::R, EdgeColor::G, EdgeColor::B}) {
    CircuitLayer layer;
    layer.color = c;
    for (int e : lat.edges_of_color(c)) {
      int u = lat.edge(e).a, v = lat.edge(e).b;  // u < v
      if (bits[u] && bits[v]) {
        layer.gates.push_back({Gate::Kind::CX, u, v, 0.0});
        bits[v] = 0;
      }
    }
    if (!layer.gates.empty()) layers.push_back(std::move(layer));
  }
  return layers;
}

void pad_layer(const EdgeColoredLattice& lat, EdgeColor c,
               const std::vector<char>& bits, std::set<int>& used,
               CircuitLayer& layer) {
  for (int e : lat.edges_of_color(c)) {
    int u = lat.edge(e).a, v = lat.edge(e).b;
    if (used.count(u) || used.count(v)) continue;
    // crossing excitation fronts can leave both endpoints set for a layer or
    // two; no direction is trivial there, so the edge stays gateless
    if (bits[u] && bits[v]) continue;
    int ctrl = !bits[u] ? u : v;  // trivial on both branches
    int tgt = ctrl == u ? v : u;
    layer.gates.push_back({Gate::Kind::CX, ctrl, tgt, 0.0});
    used.insert(u);
    used.insert(v);
  }
}

}  // namespace

LayeredCircuit synthesize_controlled_prep(const EdgeColoredLattice& lat,
                                          const PreparationTarget& t) {
  validate_target(lat, t);
  const int n = lat.n_sites();

  std::vector<char> s_full(n, 0);
  s_full[t.control] = 1;
  for (int p : t.particles) s_full[p] = 1;

  // step 1 (classical only): reduce to a sparse bitstring
  std::vector<char> sp = s_full;
  auto reduction = sparse_reduction(lat, sp);

  Tree tree = shortest_path_tree(lat, t.control, sp);

  LayeredCircuit circ;
  circ.n_sites = n;
  circ.control_qubit = t.control;

  // step 2: spread the excitation over the tree, resetting interior sites to
  // their sparse target as early as the layer cycle permits
  std::vector<char> cur(n, 0);
  cur[t.control] = 1;
  std::vector<char> seeded(n, 0);
  seeded[t.control] = 1;

  auto all_done = [&] {
    for (int v : tree.bfs_order)
      if (!seeded[v] || cur[v] != sp[v]) return false;
    return true;
  };
  auto children_seeded = [&](int v) {
    for (int c : tree.children[v])
      if (!seeded[c]) return false;
    return true;
  };

  const int max_cycles = n + 4;
  for (int cycle = 0; cycle < max_cycles && !all_done(); ++cycle) {
    for (EdgeColor color : {EdgeColor::R, EdgeColor::G, EdgeColor::B}) {
      CircuitLayer layer;
      layer.color = color;
      std::set<int> used;

      // copies outward, in BFS order
      for (int u : tree.bfs_order) {
        if (!seeded[u] || used.count(u)) continue;
        for (int v : tree.children[u]) {
          if (seeded[v] || used.count(v)) continue;
          int e = *lat.edge_index(u, v);
          if (lat.color(e) != color) continue;
          layer.gates.push_back({Gate::Kind::CX, u, v, 0.0});
          cur[v] ^= cur[u];
          seeded[v] = 1;
          used.insert(u);
          used.insert(v);
          break;  // u occupied for this layer
        }
      }

      // resets, strictly top-down: a site may clear only once its parent no
      // longer pends, so the 1 it needs below it is still in place
      for (int v : tree.bfs_order) {
        if (used.count(v) || !cur[v] || sp[v] || !children_seeded(v)) continue;
        int par = tree.parent[v];
        if (par >= 0 && !sp[par] && cur[par]) continue;
        int partner = -1;
        if (tree.parent[v] >= 0 && cur[tree.parent[v]] &&
            !used.count(tree.parent[v]) &&
            lat.color(*lat.edge_index(tree.parent[v], v)) == color)
          partner = tree.parent[v];
        if (partner < 0)
          for (int c : tree.children[v])
            if (cur[c] && !used.count(c) &&
                lat.color(*lat.edge_index(c, v)) == color) {
              partner = c;
              break;
            }
        if (partner < 0) continue;
        layer.gates.push_back({Gate::Kind::CX, partner, v, 0.0});
        cur[v] = 0;
        used.insert(v);
        used.insert(partner);
      }

      if (layer.gates.empty()) continue;
      pad_layer(lat, color, cur, used, layer);
      circ.append_layer(std::move(layer));
    }
  }
  if (!all_done())
    throw NumericalError("prep synthesis did not converge");

  // step 4: invert the reduction, mapping the sparse bitstring to the target
  for (auto it = reduction.rbegin(); it != reduction.rend(); ++it) {
    CircuitLayer layer;
    layer.color = it->color;
    std::set<int> used;
    for (const Gate& g : it->gates) {
      layer.gates.push_back(g);
      cur[g.b] ^= cur[g.a];
      used.insert(g.a);
      used.insert(g.b);
    }
    pad_layer(lat, *it->color, cur, used, layer);
    circ.append_layer(std::move(layer));
  }

  for (int v = 0; v < n; ++v)
    if (cur[v] != s_full[v])
      throw NumericalError("prep synthesis produced the wrong bitstring");

  const int bound = prep_layer_bound(excitation_spread(lat, t));
  if (circ.layer_count() > bound)
    throw NumericalError("prep synthesis exceeded the layer budget: " +
                         std::to_string(circ.layer_count()) + " > " +
                         std::to_string(bound));
  return circ;
}

int choose_control_site(const EdgeColoredLattice& lat,
                        const std::vector<int>& particles) {
  if (particles.empty())
    throw ValidationError("choose_control_site: no particles");
  int best = -1, best_depth = -1;
  for (int r = 0; r < lat.n_sites(); ++r) {
    if (std::find(particles.begin(), particles.end(), r) != particles.end())
      continue;
    auto dist = lat.distances_from(r);
    int depth = 0;
    bool ok = true;
    for (int p : particles) {
      if (dist[p] < 0) {
        ok = false;
        break;
      }
      depth = std::max(depth, dist[p]);
    }
    if (!ok) continue;
    if (best < 0 || depth < best_depth) {
      best = r;
      best_depth = depth;
    }
  }
  if (best < 0)
    throw ValidationError("choose_control_site: no site reaches all particles");
  return best;
}

}  // namespace kqd
