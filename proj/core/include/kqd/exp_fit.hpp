#pragma once

#include <vector>

namespace kqd {

// y(x) ~ e_inf + amplitude * exp(-rate * x), amplitude and rate constrained
// nonnegative through an internal squared parametrization.
struct ExpDecayFit {
  double e_inf = 0.0;
  double amplitude = 0.0;
  double rate = 0.0;
  double rms = 0.0;  // per-point rms residual
  bool converged = false;

  double at(double x) const;
};

ExpDecayFit fit_exp_decay(const std::vector<double>& xs,
                          const std::vector<double>& ys);

// Weighted least squares y ~ a + b x. Weights 1/sigma^2; zero/absent sigmas
// fall back to unweighted.
struct LinearFit {
  double a = 0.0, b = 0.0;
  double std_a = 0.0;
  double chi2 = 0.0;
};

LinearFit fit_linear_weighted(const std::vector<double>& xs,
                              const std::vector<double>& ys,
                              const std::vector<double>& sigmas);

// Weighted fit of y ~ a * exp(-b x) for extrapolation to x = 0.
struct ExpZeroFit {
  double a = 0.0, b = 0.0;
  double std_a = 0.0;
  double chi2 = 0.0;
  bool converged = false;
};

ExpZeroFit fit_exp_zero(const std::vector<double>& xs,
                        const std::vector<double>& ys,
                        const std::vector<double>& sigmas);

}  // namespace kqd
