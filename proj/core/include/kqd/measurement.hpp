#pragma once

#include <vector>

#include "kqd/lattice.hpp"
#include "kqd/pauli.hpp"
#include "kqd/prep.hpp"

namespace kqd {

// (ancilla Pauli x system term) pushed through the logical controlled
// preparation, i.e. conjugated by the CX fan-out from the control to every
// particle. `measured` is the phase-free Pauli actually read out;
// sign * measured equals the conjugated operator.
struct ConjugatedObservable {
  PauliOp control_pauli = PauliOp::X;  // ancilla axis before conjugation
  int term_index = -1;                 // into the term list; -1 = overlap row
  PauliString measured;
  double sign = 1.0;
};

// Conjugates (control_pauli x P) for every term plus the overlap observable
// (P = identity). Terms must not straddle two particles.
std::vector<ConjugatedObservable> conjugate_observables(
    const std::vector<PauliTerm>& terms, PauliOp control_pauli,
    const PreparationTarget& target, int n_sites);

struct MeasurementBasis {
  std::vector<PauliOp> setting;  // per-qubit axis
  std::vector<int> covered;      // observable indices diagonal in this basis
};

bool diagonal_in(const PauliString& op, const std::vector<PauliOp>& setting);

// Everything the estimator needs for one reference state: the conjugated
// observable list for ancilla X and Y, the YY->XX value-copy map, and the
// 2(k+2) measurement bases with brute-force coverage.
struct MeasurementPlan {
  std::vector<PauliTerm> terms;  // system Hamiltonian, full-register indexing
  std::vector<ConjugatedObservable> observables;
  std::vector<MeasurementBasis> bases;
  // per term: partner whose measured value this term reuses (-1 = measured
  // directly); YY terms point at their XX sibling
  std::vector<int> value_copy_from;
  // observable index for (control_pauli, term); -1 where value-copied
  std::vector<int> obs_x_of_term, obs_y_of_term;
  int overlap_obs_x = -1, overlap_obs_y = -1;
  int k = 0;
};

MeasurementPlan build_measurement_plan(const EdgeColoredLattice& lat,
                                       const PreparationTarget& target);

// The Table-rows basis family alone (also exposed through the plan).
std::vector<MeasurementBasis> measurement_bases(const EdgeColoredLattice& lat,
                                                const PreparationTarget& target);

}  // namespace kqd
