#include "kqd/circuit.hpp"

#include <set>

#include "kqd/errors.hpp"

namespace kqd {

namespace {
double layer_vacuum_phase(const CircuitLayer& layer) {
  double phi = 0;
  for (const Gate& g : layer.gates) {
    switch (g.kind) {
      case Gate::Kind::CX:
        break;  // fixes |0...0>
      case Gate::Kind::HeisenbergEdge:
        phi -= g.angle;  // ZZ eigenvalue +1 on the vacuum, XX+YY annihilate it
        break;
    }
  }
  return phi;
}

void check_layer(const CircuitLayer& layer, int n_sites) {
  std::set<int> used;
  for (const Gate& g : layer.gates) {
    if (g.a < 0 || g.b < 0 || g.a >= n_sites || g.b >= n_sites || g.a == g.b)
      throw ValidationError("circuit layer: gate sites out of range");
    if (!used.insert(g.a).second || !used.insert(g.b).second)
      throw ValidationError("circuit layer: overlapping gates");
  }
}
}  // namespace

void LayeredCircuit::append_layer(CircuitLayer layer) {
  check_layer(layer, n_sites);
  vacuum_phase += layer_vacuum_phase(layer);
  layers.push_back(std::move(layer));
}

void LayeredCircuit::append_circuit(const LayeredCircuit& other) {
  if (other.n_sites != n_sites)
    throw ValidationError("append_circuit: register size mismatch");
  for (const auto& l : other.layers) append_layer(l);
}

double vacuum_phase(const LayeredCircuit& circ) {
  double phi = 0;
  for (const auto& layer : circ.layers) phi += layer_vacuum_phase(layer);
  return phi;
}

namespace {
CircuitLayer heisenberg_layer(const EdgeColoredLattice& lat, EdgeColor c,
                              double time_fraction) {
  CircuitLayer layer;
  layer.color = c;
  for (int e : lat.edges_of_color(c)) {
    Gate g;
    g.kind = Gate::Kind::HeisenbergEdge;
    g.a = lat.edge(e).a;
    g.b = lat.edge(e).b;
    g.angle = lat.coupling(e) * time_fraction;
    layer.gates.push_back(g);
  }
  return layer;
}
}  // namespace

LayeredCircuit build_trotter(const EdgeColoredLattice& lat, double dt, int steps,
                             int order) {
  if (steps < 1) throw ValidationError("build_trotter: steps must be >= 1");
  if (order != 1 && order != 2)
    throw ValidationError("build_trotter: order must be 1 or 2");
  if (!std::isfinite(dt)) throw ValidationError("build_trotter: dt not finite");

  LayeredCircuit circ;
  circ.n_sites = lat.n_sites();
  const double tau = dt / steps;

  if (order == 1) {
    for (int s = 0; s < steps; ++s)
      for (EdgeColor c : {EdgeColor::R, EdgeColor::G, EdgeColor::B})
        circ.append_layer(heisenberg_layer(lat, c, tau));
    return circ;
  }

  // R(tau/2) G(tau/2) B(tau) G(tau/2) R(tau/2) per step; consecutive R
  // boundary layers merge into R(tau).
  for (int s = 0; s < steps; ++s) {
    double head = (s == 0) ? tau / 2 : tau;  // merged with previous tail
    circ.append_layer(heisenberg_layer(lat, EdgeColor::R, head));
    circ.append_layer(heisenberg_layer(lat, EdgeColor::G, tau / 2));
    circ.append_layer(heisenberg_layer(lat, EdgeColor::B, tau));
    circ.append_layer(heisenberg_layer(lat, EdgeColor::G, tau / 2));
  }
  circ.append_layer(heisenberg_layer(lat, EdgeColor::R, tau / 2));
  return circ;
}

void apply_circuit(SectorState& state, const LayeredCircuit& circ) {
  for (const auto& layer : circ.layers)
    for (const Gate& g : layer.gates) {
      if (g.kind != Gate::Kind::HeisenbergEdge)
        throw ValidationError(
            "apply_circuit(sector): gate does not preserve Hamming weight");
      apply_heisenberg_edge(state, g.a, g.b, g.angle);
    }
}

void apply_circuit(DenseState& state, const LayeredCircuit& circ) {
  for (const auto& layer : circ.layers)
    for (const Gate& g : layer.gates) {
      switch (g.kind) {
        case Gate::Kind::CX: apply_cx(state, g.a, g.b); break;
        case Gate::Kind::HeisenbergEdge:
          apply_heisenberg_edge(state, g.a, g.b, g.angle);
          break;
      }
    }
}

}  // namespace kqd
