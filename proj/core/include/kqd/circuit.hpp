#pragma once

#include <optional>
#include <vector>

#include "kqd/dense_state.hpp"
#include "kqd/lattice.hpp"
#include "kqd/sector_state.hpp"

namespace kqd {

struct Gate {
  enum class Kind { CX, HeisenbergEdge };
  Kind kind = Kind::CX;
  int a = 0;  // CX control / edge site
  int b = 0;  // CX target / edge site
  double angle = 0.0;  // exp(-i angle (XX+YY+ZZ)) for HeisenbergEdge
};

struct CircuitLayer {
  std::optional<EdgeColor> color;  // the matching this layer belongs to
  std::vector<Gate> gates;         // pairwise-disjoint supports
};

// Ordered two-qubit-gate layers plus the analytically tracked phase the
// circuit imparts to |0...0>.
struct LayeredCircuit {
  int n_sites = 0;
  std::optional<int> control_qubit;
  std::vector<CircuitLayer> layers;
  double vacuum_phase = 0.0;

  int layer_count() const { return static_cast<int>(layers.size()); }
  void append_layer(CircuitLayer layer);
  void append_circuit(const LayeredCircuit& other);
};

// Phase recomputed from the gate list; matches the accumulated field.
// Throws if a gate kind does not fix the vacuum.
double vacuum_phase(const LayeredCircuit& circ);

// steps sweeps of the symmetric (order 2) or plain (order 1) product formula
// over the color groups, approximating exp(-i H dt). Adjacent equal-color
// boundary layers are merged, giving 4*steps+1 layers at order 2.
LayeredCircuit build_trotter(const EdgeColoredLattice& lat, double dt, int steps,
                             int order = 2);

// Sector application rejects gates that change Hamming weight (CX).
void apply_circuit(SectorState& state, const LayeredCircuit& circ);
void apply_circuit(DenseState& state, const LayeredCircuit& circ);

}  // namespace kqd
