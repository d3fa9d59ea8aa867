#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "kqd/circuit.hpp"
#include "kqd/lattice.hpp"
#include "kqd/measurement.hpp"
#include "kqd/prep.hpp"
#include "kqd/rng.hpp"
#include "kqd/sector_state.hpp"

namespace kqd {

// One experiment's geometry: the full register (system + control), the
// reference state, and the two derived views used by the simulators.
struct ExperimentLayout {
  EdgeColoredLattice full;
  PreparationTarget target;
  Sublattice system;               // full minus the control site
  std::vector<int> particles_sys;  // particle sites renumbered into `system`
  std::uint64_t psi0_bits = 0;     // reference bitstring, system indexing
  EdgeColoredLattice evolution;    // full indexing with control edges dropped

  static ExperimentLayout make(EdgeColoredLattice full, PreparationTarget t);

  int n_system() const { return system.lattice.n_sites(); }
  int k() const { return static_cast<int>(target.particles.size()); }
};

enum class PairStructure { Toeplitz, Hermitian };

struct Provenance {
  enum class Mode { Exact, Shots, Noisy };
  Mode mode = Mode::Exact;
  std::int64_t n_shots = 0;
  std::uint64_t seed = 0;
  int twirls = 0;
  std::vector<double> gains;
  std::string noise_model;
  int n_system = 0;  // system register size behind the pencil
};

std::string to_string(PairStructure s);
std::string to_string(Provenance::Mode m);

// The projected matrix pencil. Hermitian within 1e-12 by construction; for
// Toeplitz structure entry (j,k) depends only on k-j.
struct KrylovPair {
  int D = 0;
  double dt = 0.0;
  PairStructure structure = PairStructure::Toeplitz;
  Eigen::MatrixXcd H, S;
  Provenance provenance;

  KrylovPair leading(int d_prime) const;  // principal submatrix pencil
};

inline constexpr std::uint64_t kDefaultSectorBudget = 1ull << 24;

// m_d = <psi0|H U^d|psi0>, s_d = <psi0|U^d|psi0> by repeated application of
// the Trotter circuit in the sector simulator; Toeplitz fill.
KrylovPair exact_elements(const ExperimentLayout& layout, double dt, int steps,
                          int D, int order = 2,
                          std::uint64_t budget = kDefaultSectorBudget);

// H_jk = <psi_j|H|psi_k> with psi_j the Trotterized iterates; differs from
// the Toeplitz fill once the evolution is approximate.
KrylovPair exact_elements_hermitian(const ExperimentLayout& layout, double dt,
                                    int steps, int D, int order = 2,
                                    std::uint64_t budget = kDefaultSectorBudget);

// Exact ancilla-interference readout values for every planned observable at
// every distance, with the tracked vacuum phase per distance.
struct HadamardExpectations {
  int D = 0;
  double dt = 0.0;
  std::vector<double> phase;                 // phi_d
  std::vector<std::vector<double>> values;   // [d][observable]
};

HadamardExpectations hadamard_test_expectations(
    const ExperimentLayout& layout, const MeasurementPlan& plan, double dt,
    int steps, int D, int order = 2,
    std::uint64_t budget = kDefaultSectorBudget);

// Assembles the Toeplitz pair from per-observable values (exact or
// estimated), applying the vacuum-phase correction, the Hamiltonian
// coefficients and the YY value reuse. Off-diagonal distances come from the
// data; the diagonal is pinned classically.
KrylovPair pair_from_observable_values(
    const ExperimentLayout& layout, const MeasurementPlan& plan,
    const std::vector<std::vector<double>>& values,
    const std::vector<double>& phase, double dt, Provenance provenance);

// Per-(distance, basis, observable-slot) counts of +1 outcomes. Observables
// sharing a basis share that basis' shot budget.
struct ShotData {
  int n_shots = 0;
  std::uint64_t seed = 0;
  std::vector<std::vector<std::vector<std::int64_t>>> counts;  // [d][basis][slot]
};

ShotData sample_shots(const HadamardExpectations& exact,
                      const MeasurementPlan& plan, int n_shots,
                      std::uint64_t seed);

// Per-observable means, averaged over every basis covering the observable.
std::vector<std::vector<double>> estimates_from_shots(const MeasurementPlan& plan,
                                                      const ShotData& data);

ShotData resample_shots(const ShotData& data, Rng& rng);

}  // namespace kqd
