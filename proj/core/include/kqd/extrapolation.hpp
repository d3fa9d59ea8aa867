#pragma once

#include <vector>

namespace kqd {

// Zero-noise extrapolation of one observable over gains. Exponential is used
// only when all three downgrade criteria pass:
//  (i)  extrapolated value within [-1, 1]
//  (ii) chi2 of the exponential fit below the linear one
//  (iii) std(a)/|a| below 0.5
struct ExtrapolationResult {
  enum class Method { Exponential, Linear };

  std::vector<double> gains, means, stds;
  Method method = Method::Linear;
  double value = 0.0;      // extrapolated observable at gain 0
  double std_value = 0.0;  // fit standard deviation of the value
  double chi2_exp = 0.0;
  double chi2_lin = 0.0;
  double std_ratio = 0.0;  // std(a)/|a| for the exponential fit
};

ExtrapolationResult extrapolate(const std::vector<double>& gains,
                                const std::vector<double>& means,
                                const std::vector<double>& stds);

}  // namespace kqd
