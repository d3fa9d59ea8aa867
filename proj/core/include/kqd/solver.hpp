#pragma once

#include <Eigen/Dense>
#include <functional>
#include <optional>
#include <vector>

#include "kqd/exp_fit.hpp"
#include "kqd/krylov.hpp"

namespace kqd {

struct RegularizationConfig {
  double eps_init_base = 1e-8;
  double search_factor = 10.0;
  double fit_rms_tol = 0.5;  // per-point rms on the energy curve
  double max_threshold = 1.0;

  void validate() const;
};

struct SolveResult {
  double energy = 0.0;
  Eigen::VectorXcd coeffs;  // unit S-norm Ritz coordinates
  int retained = 0;         // overlap eigenvalues kept above the threshold
};

// Project both matrices onto the overlap eigenspaces above eps, then solve
// the whitened problem in the retained subspace. Throws NumericalError when
// nothing survives the threshold.
SolveResult solve_regularized(const KrylovPair& pair, double eps);

// Lowest energy from each leading D'xD' pencil at threshold eps_base * D'.
struct EnergyCurve {
  std::vector<double> energy;      // index d = D'-1; meaningless where !defined
  std::vector<double> threshold;
  std::vector<char> defined;
  ExpDecayFit fit;                 // filled by auto_regularize
  bool all_defined() const;
  std::vector<double> defined_dims() const;
  std::vector<double> defined_energies() const;
};

EnergyCurve energy_curve(const KrylovPair& pair, double eps_base);

struct AutoRegResult {
  double eps_base = 0.0;
  EnergyCurve curve;
  int thresholds_tried = 0;
  bool fit_ever_failed = false;  // some step's decay fit did not converge
};

// Logarithmic search upward from eps_init_base until the curve fits an
// exponential decay to within fit_rms_tol. Throws NumericalError
// ("ill-conditioned data") when no threshold below max_threshold passes.
AutoRegResult auto_regularize(const KrylovPair& pair,
                              const RegularizationConfig& cfg);

// Rebuilds a pair from resampled raw data; supplied by the estimation path.
using PairRebuild = std::function<KrylovPair(Rng&)>;

struct BootstrapResult {
  std::vector<double> std_per_d;   // over accepted resamples, index D'-1
  std::vector<double> mean_per_d;
  int accepted = 0;
  int rejected = 0;
  int rejected_above_reference = 0;  // energy above the D'=1 energy
  int rejected_fit_failure = 0;      // regularization search failed
};

BootstrapResult bootstrap(const PairRebuild& rebuild, int n_resamples,
                          const RegularizationConfig& cfg, std::uint64_t seed,
                          int threads = 1);

}  // namespace kqd
