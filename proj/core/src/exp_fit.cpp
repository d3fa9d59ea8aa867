#include "kqd/exp_fit.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "kqd/errors.hpp"

namespace kqd {

double ExpDecayFit::at(double x) const {
  return e_inf + amplitude * std::exp(-rate * x);
}

namespace {
double rms_residual(const std::vector<double>& xs, const std::vector<double>& ys,
                    double c, double a2, double b2) {
  double acc = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    double r = c + a2 * std::exp(-b2 * xs[i]) - ys[i];
    acc += r * r;
  }
  return std::sqrt(acc / static_cast<double>(xs.size()));
}
}  // namespace

ExpDecayFit fit_exp_decay(const std::vector<double>& xs,
                          const std::vector<double>& ys) {
  if (xs.size() != ys.size()) throw ValidationError("fit_exp_decay: size mismatch");
  const std::size_t n = xs.size();
  ExpDecayFit fit;
  if (n == 0) throw ValidationError("fit_exp_decay: empty data");
  if (n <= 2) {
    fit.e_inf = ys.back();
    fit.amplitude = n == 2 ? std::max(0.0, ys.front() - ys.back()) : 0.0;
    fit.rate = 1.0;
    fit.rms = 0.0;
    fit.converged = true;
    return fit;
  }

  double ymin = *std::min_element(ys.begin(), ys.end());
  double ymax = *std::max_element(ys.begin(), ys.end());
  // parameters (c, a, b) with model c + a^2 exp(-b^2 x)
  Eigen::Vector3d theta(ymin, std::sqrt(std::max(ymax - ymin, 1e-12)), 1.0);

  auto cost_of = [&](const Eigen::Vector3d& t) {
    double acc = 0;
    for (std::size_t i = 0; i < n; ++i) {
      double r = t[0] + t[1] * t[1] * std::exp(-t[2] * t[2] * xs[i]) - ys[i];
      acc += r * r;
    }
    return acc;
  };

  double lambda = 1e-3;
  double cost = cost_of(theta);
  bool converged = false;
  for (int iter = 0; iter < 300; ++iter) {
    Eigen::Matrix3d jtj = Eigen::Matrix3d::Zero();
    Eigen::Vector3d jtr = Eigen::Vector3d::Zero();
    for (std::size_t i = 0; i < n; ++i) {
      double e = std::exp(-theta[2] * theta[2] * xs[i]);
      double r = theta[0] + theta[1] * theta[1] * e - ys[i];
      Eigen::Vector3d j(1.0, 2.0 * theta[1] * e,
                        -2.0 * theta[2] * xs[i] * theta[1] * theta[1] * e);
      jtj += j * j.transpose();
      jtr += j * r;
    }
    bool stepped = false;
    for (int tries = 0; tries < 24; ++tries) {
      Eigen::Matrix3d damped = jtj + lambda * Eigen::Matrix3d::Identity();
      Eigen::Vector3d delta = damped.ldlt().solve(-jtr);
      if (!delta.allFinite()) {
        lambda *= 4;
        continue;
      }
      Eigen::Vector3d cand = theta + delta;
      double c2 = cost_of(cand);
      if (std::isfinite(c2) && c2 <= cost) {
        double rel = delta.norm() / (1.0 + theta.norm());
        theta = cand;
        double improvement = cost - c2;
        cost = c2;
        lambda = std::max(lambda / 3, 1e-12);
        stepped = true;
        if (rel < 1e-11 || improvement < 1e-15 * (1.0 + cost)) converged = true;
        break;
      }
      lambda *= 4;
    }
    if (!stepped || converged) {
      converged = converged || stepped;
      break;
    }
  }

  fit.e_inf = theta[0];
  fit.amplitude = theta[1] * theta[1];
  fit.rate = theta[2] * theta[2];
  fit.rms = rms_residual(xs, ys, theta[0], fit.amplitude, fit.rate);
  fit.converged = converged && std::isfinite(fit.rms);
  return fit;
}

namespace {
std::vector<double> effective_weights(const std::vector<double>& sigmas,
                                      std::size_t n) {
  std::vector<double> w(n, 1.0);
  bool usable = sigmas.size() == n;
  if (usable)
    for (double s : sigmas)
      if (!(s > 0)) usable = false;
  if (usable)
    for (std::size_t i = 0; i < n; ++i) w[i] = 1.0 / (sigmas[i] * sigmas[i]);
  return w;
}
}  // namespace

LinearFit fit_linear_weighted(const std::vector<double>& xs,
                              const std::vector<double>& ys,
                              const std::vector<double>& sigmas) {
  const std::size_t n = xs.size();
  if (n < 2 || ys.size() != n)
    throw ValidationError("fit_linear_weighted: need >= 2 points");
  auto w = effective_weights(sigmas, n);

  double sw = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sw += w[i];
    sx += w[i] * xs[i];
    sy += w[i] * ys[i];
    sxx += w[i] * xs[i] * xs[i];
    sxy += w[i] * xs[i] * ys[i];
  }
  double det = sw * sxx - sx * sx;
  LinearFit fit;
  fit.a = (sxx * sy - sx * sxy) / det;
  fit.b = (sw * sxy - sx * sy) / det;
  for (std::size_t i = 0; i < n; ++i) {
    double r = fit.a + fit.b * xs[i] - ys[i];
    fit.chi2 += w[i] * r * r;
  }
  double var_a = sxx / det;
  if (sigmas.size() != n || !(sigmas[0] > 0)) {
    // unweighted: scale by residual variance
    double dof = std::max<double>(1.0, static_cast<double>(n) - 2.0);
    var_a *= fit.chi2 / dof;
  }
  fit.std_a = std::sqrt(std::max(var_a, 0.0));
  return fit;
}

ExpZeroFit fit_exp_zero(const std::vector<double>& xs,
                        const std::vector<double>& ys,
                        const std::vector<double>& sigmas) {
  const std::size_t n = xs.size();
  if (n < 2 || ys.size() != n)
    throw ValidationError("fit_exp_zero: need >= 2 points");
  auto w = effective_weights(sigmas, n);

  // log-linear initialization on |y|, sign from the first point
  double sign = ys[0] >= 0 ? 1.0 : -1.0;
  std::vector<double> lx, ly, lw;
  for (std::size_t i = 0; i < n; ++i) {
    double ay = std::abs(ys[i]);
    if (ay > 1e-14) {
      lx.push_back(xs[i]);
      ly.push_back(std::log(ay));
      lw.push_back(1.0);
    }
  }
  double a0 = 1e-12 * sign, b0 = 0.0;
  if (lx.size() >= 2) {
    LinearFit ll = fit_linear_weighted(lx, ly, {});
    a0 = sign * std::exp(ll.a);
    b0 = -ll.b;
  } else if (lx.size() == 1) {
    a0 = ys[0];
  }

  Eigen::Vector2d theta(a0, b0);
  auto chi2_of = [&](const Eigen::Vector2d& t) {
    double acc = 0;
    for (std::size_t i = 0; i < n; ++i) {
      double r = t[0] * std::exp(-t[1] * xs[i]) - ys[i];
      acc += w[i] * r * r;
    }
    return acc;
  };

  double lambda = 1e-3;
  double cost = chi2_of(theta);
  bool converged = false;
  for (int iter = 0; iter < 200; ++iter) {
    Eigen::Matrix2d jtj = Eigen::Matrix2d::Zero();
    Eigen::Vector2d jtr = Eigen::Vector2d::Zero();
    for (std::size_t i = 0; i < n; ++i) {
      double e = std::exp(-theta[1] * xs[i]);
      double r = theta[0] * e - ys[i];
      Eigen::Vector2d j(e, -theta[0] * xs[i] * e);
      jtj += w[i] * j * j.transpose();
      jtr += w[i] * j * r;
    }
    bool stepped = false;
    for (int tries = 0; tries < 24; ++tries) {
      Eigen::Vector2d delta =
          (jtj + lambda * Eigen::Matrix2d::Identity()).ldlt().solve(-jtr);
      if (!delta.allFinite()) {
        lambda *= 4;
        continue;
      }
      Eigen::Vector2d cand = theta + delta;
      double c2 = chi2_of(cand);
      if (std::isfinite(c2) && c2 <= cost) {
        double rel = delta.norm() / (1.0 + theta.norm());
        theta = cand;
        cost = c2;
        lambda = std::max(lambda / 3, 1e-12);
        stepped = true;
        if (rel < 1e-11) converged = true;
        break;
      }
      lambda *= 4;
    }
    if (!stepped || converged) {
      converged = converged || stepped;
      break;
    }
  }

  ExpZeroFit fit;
  fit.a = theta[0];
  fit.b = theta[1];
  fit.chi2 = cost;
  fit.converged = converged && std::isfinite(cost);

  Eigen::Matrix2d jtj = Eigen::Matrix2d::Zero();
  for (std::size_t i = 0; i < n; ++i) {
    double e = std::exp(-theta[1] * xs[i]);
    Eigen::Vector2d j(e, -theta[0] * xs[i] * e);
    jtj += w[i] * j * j.transpose();
  }
  Eigen::Matrix2d cov = jtj.inverse();
  double var_a = cov(0, 0);
  if (sigmas.size() != n || !(sigmas[0] > 0)) {
    double dof = std::max<double>(1.0, static_cast<double>(n) - 2.0);
    var_a *= fit.chi2 / dof;
  }
  fit.std_a = std::isfinite(var_a) && var_a > 0 ? std::sqrt(var_a) : 0.0;
  return fit;
}

}  // namespace kqd
