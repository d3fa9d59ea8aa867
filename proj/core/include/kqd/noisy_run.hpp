#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "kqd/dense_state.hpp"
#include "kqd/extrapolation.hpp"
#include "kqd/krylov.hpp"
#include "kqd/measurement.hpp"
#include "kqd/noise.hpp"
#include "kqd/readout.hpp"

namespace kqd {

struct NoisyRunConfig {
  std::vector<double> gains = {1.0, 1.3, 1.6};
  int twirls = 100;
  int shots = 500;
  int calib_shots = 20000;
  std::uint64_t seed = 1;
  int threads = 1;
  int dense_cap = DenseState::kDefaultCap;
  std::array<PauliLindbladModel, 3> layer_models;  // indexed by EdgeColor
  ReadoutModel readout;

  void validate(int n_sites) const;
};

// Classical (twirl-corrected) outcome bitstrings per trajectory group.
// Distance 0 carries no data: the pencil diagonal is classical.
struct NoisyShotTable {
  int n_gains = 0, D = 0, n_bases = 0, twirls = 0, shots = 0;
  std::vector<std::vector<std::uint16_t>> groups;

  std::size_t index(int g, int d, int b, int t) const {
    return ((static_cast<std::size_t>(g) * D + d) * n_bases + b) * twirls + t;
  }
};

NoisyShotTable resample_table(const NoisyShotTable& table, Rng& rng);

// Per (gain, distance, observable) mean and standard deviation of the mean,
// with twirl instances as the resolution unit.
struct GainEstimates {
  std::vector<std::vector<std::vector<double>>> mean, std;  // [g][d][obs]
};

GainEstimates aggregate_table(const MeasurementPlan& plan,
                              const NoisyShotTable& table);

struct NoisyRunResult {
  std::vector<KrylovPair> per_gain;  // TREX-mitigated, no extrapolation
  KrylovPair unmitigated;            // first gain, raw readout
  KrylovPair extrapolated;           // TREX + amplification + extrapolation
  NoisyShotTable table;
  std::vector<double> trex_lambda;   // per observable
  std::vector<double> phase;         // vacuum phase per distance
  MeasurementPlan plan;
  int exponential_fits = 0, linear_fits = 0;
};

// Stochastic Pauli-error trajectories over the full register: each two-qubit
// layer draws an insertion from its color's model at the requested gain,
// measurement uses twirled readout, and estimates are extrapolated to zero
// noise per observable.
NoisyRunResult noisy_krylov_run(const ExperimentLayout& layout, double dt,
                                int steps, int D, const NoisyRunConfig& cfg,
                                int order = 2);

// Pair assembly from a (possibly resampled) table; used by bootstrap.
KrylovPair extrapolated_pair_from_table(
    const ExperimentLayout& layout, const MeasurementPlan& plan,
    const NoisyShotTable& table, const std::vector<double>& trex_lambda,
    const std::vector<double>& phase, const std::vector<double>& gains,
    double dt);

}  // namespace kqd
