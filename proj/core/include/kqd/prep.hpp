#pragma once

#include <vector>

#include "kqd/circuit.hpp"
#include "kqd/lattice.hpp"

namespace kqd {

// Reference bitstring: k particle sites plus the auxiliary (control) qubit
// whose excitation seeds the spreading circuit.
struct PreparationTarget {
  int control = 0;
  std::vector<int> particles;  // sorted ascending; excludes the control
};

// Throws ValidationError on out-of-range sites, control among particles,
// adjacent particles, or particles unreachable from the control.
void validate_target(const EdgeColoredLattice& lat, const PreparationTarget& t);

// Max pairwise graph distance over the initial excitations
// ({control} plus particles).
int excitation_spread(const EdgeColoredLattice& lat, const PreparationTarget& t);

// Layer budget 3*(ceil(dist_exc/2) + 2) for the synthesized circuit.
int prep_layer_bound(int dist_exc);

// CX-layer circuit mapping the post-Hadamard superposition
// (|0...0> + |control=1>)/sqrt(2) to (|0...0> + |s>)/sqrt(2), where s has 1s
// on the control and every particle. Every emitted layer is a full color
// layer: gates not needed by the construction are padded in with their
// control on a 0-valued endpoint so they act trivially on both branches.
LayeredCircuit synthesize_controlled_prep(const EdgeColoredLattice& lat,
                                          const PreparationTarget& t);

// Control placement minimizing the BFS tree depth over the particles,
// tie-broken by lowest site index. Candidates exclude the particles.
int choose_control_site(const EdgeColoredLattice& lat,
                        const std::vector<int>& particles);

}  // namespace kqd
