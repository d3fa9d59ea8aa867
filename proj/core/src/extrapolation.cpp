#include "kqd/extrapolation.hpp"

#include <cmath>

#include "kqd/errors.hpp"
#include "kqd/exp_fit.hpp"

namespace kqd {

ExtrapolationResult extrapolate(const std::vector<double>& gains,
                                const std::vector<double>& means,
                                const std::vector<double>& stds) {
  if (gains.size() < 2)
    throw ValidationError("extrapolate: need at least two gains");
  if (means.size() != gains.size())
    throw ValidationError("extrapolate: means/gains size mismatch");

  ExtrapolationResult res;
  res.gains = gains;
  res.means = means;
  res.stds = stds;

  LinearFit lin = fit_linear_weighted(gains, means, stds);
  ExpZeroFit exp = fit_exp_zero(gains, means, stds);

  res.chi2_lin = lin.chi2;
  res.chi2_exp = exp.chi2;
  res.std_ratio = std::abs(exp.a) > 0 ? exp.std_a / std::abs(exp.a) : 1e300;

  bool use_exp = exp.converged && std::abs(exp.a) <= 1.0 &&
                 exp.chi2 < lin.chi2 && res.std_ratio < 0.5;
  if (use_exp) {
    res.method = ExtrapolationResult::Method::Exponential;
    res.value = exp.a;
    res.std_value = exp.std_a;
  } else {
    res.method = ExtrapolationResult::Method::Linear;
    res.value = lin.a;
    res.std_value = lin.std_a;
  }
  return res;
}

}  // namespace kqd
