#include "kqd/solver.hpp"

#include <Eigen/Eigenvalues>
#include <atomic>
#include <cmath>
#include <mutex>
#include <thread>

#include "kqd/errors.hpp"

namespace kqd {

void RegularizationConfig::validate() const {
  if (!(eps_init_base > 0) || !(eps_init_base < max_threshold))
    throw ValidationError("regularization: need 0 < eps_init_base < max_threshold");
  if (!(search_factor > 1))
    throw ValidationError("regularization: search_factor must be > 1");
  if (!(fit_rms_tol > 0))
    throw ValidationError("regularization: fit_rms_tol must be > 0");
}

SolveResult solve_regularized(const KrylovPair& pair, double eps) {
  if (eps < 0) throw ValidationError("solve_regularized: eps must be >= 0");
  const int D = pair.D;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(pair.S);
  if (es.info() != Eigen::Success)
    throw NumericalError("solve_regularized: overlap eigendecomposition failed");

  std::vector<int> keep;
  for (int i = 0; i < D; ++i)
    if (es.eigenvalues()[i] > eps) keep.push_back(i);
  if (keep.empty())
    throw NumericalError("solve_regularized: empty retained subspace");

  const int r = static_cast<int>(keep.size());
  Eigen::MatrixXcd w(D, r);
  for (int c = 0; c < r; ++c)
    w.col(c) = es.eigenvectors().col(keep[c]) /
               std::sqrt(es.eigenvalues()[keep[c]]);

  Eigen::MatrixXcd a = w.adjoint() * pair.H * w;
  a = ((a + a.adjoint()) / 2.0).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> ea(a);
  if (ea.info() != Eigen::Success)
    throw NumericalError("solve_regularized: projected solve failed");

  SolveResult out;
  out.energy = ea.eigenvalues()[0];
  out.coeffs = w * ea.eigenvectors().col(0);
  out.retained = r;
  return out;
}

bool EnergyCurve::all_defined() const {
  for (char d : defined)
    if (!d) return false;
  return true;
}

std::vector<double> EnergyCurve::defined_dims() const {
  std::vector<double> xs;
  for (std::size_t i = 0; i < energy.size(); ++i)
    if (defined[i]) xs.push_back(static_cast<double>(i + 1));
  return xs;
}

std::vector<double> EnergyCurve::defined_energies() const {
  std::vector<double> ys;
  for (std::size_t i = 0; i < energy.size(); ++i)
    if (defined[i]) ys.push_back(energy[i]);
  return ys;
}

EnergyCurve energy_curve(const KrylovPair& pair, double eps_base) {
  EnergyCurve curve;
  curve.energy.assign(pair.D, 0.0);
  curve.threshold.assign(pair.D, 0.0);
  curve.defined.assign(pair.D, 0);
  for (int dp = 1; dp <= pair.D; ++dp) {
    double eps = eps_base * dp;
    curve.threshold[dp - 1] = eps;
    try {
      curve.energy[dp - 1] = solve_regularized(pair.leading(dp), eps).energy;
      curve.defined[dp - 1] = 1;
    } catch (const NumericalError&) {
      // point stays missing
    }
  }
  return curve;
}

AutoRegResult auto_regularize(const KrylovPair& pair,
                              const RegularizationConfig& cfg) {
  cfg.validate();
  AutoRegResult res;
  double eps_base = cfg.eps_init_base;
  while (eps_base <= cfg.max_threshold) {
    ++res.thresholds_tried;
    EnergyCurve curve = energy_curve(pair, eps_base);
    auto xs = curve.defined_dims();
    auto ys = curve.defined_energies();
    if (!xs.empty()) {
      ExpDecayFit fit = fit_exp_decay(xs, ys);
      if (!fit.converged) res.fit_ever_failed = true;
      if (fit.converged && curve.all_defined() && fit.rms <= cfg.fit_rms_tol) {
        curve.fit = fit;
        res.eps_base = eps_base;
        res.curve = std::move(curve);
        return res;
      }
    }
    eps_base *= cfg.search_factor;
  }
  throw NumericalError("auto_regularize: ill-conditioned data");
}

BootstrapResult bootstrap(const PairRebuild& rebuild, int n_resamples,
                          const RegularizationConfig& cfg, std::uint64_t seed,
                          int threads) {
  if (n_resamples < 1)
    throw ValidationError("bootstrap: n_resamples must be >= 1");
  cfg.validate();

  std::vector<std::vector<double>> accepted_curves;
  int rejected_above = 0, rejected_fit = 0;
  std::mutex mu;

  auto work = [&](int r) {
    Rng rng = make_rng(seed, {static_cast<std::uint64_t>(r)});
    bool fit_failed = false;
    std::optional<EnergyCurve> curve;
    try {
      KrylovPair pair = rebuild(rng);
      AutoRegResult ar = auto_regularize(pair, cfg);
      fit_failed = ar.fit_ever_failed;
      curve = std::move(ar.curve);
    } catch (const NumericalError&) {
      fit_failed = true;
    }
    std::lock_guard<std::mutex> lock(mu);
    if (fit_failed || !curve) {
      ++rejected_fit;
      return;
    }
    const double reference = curve->energy[0];  // D' = 1
    for (std::size_t i = 1; i < curve->energy.size(); ++i)
      if (curve->defined[i] && curve->energy[i] > reference) {
        ++rejected_above;
        return;
      }
    accepted_curves.push_back(curve->energy);
  };

  if (threads <= 1) {
    for (int r = 0; r < n_resamples; ++r) work(r);
  } else {
    std::vector<std::thread> pool;
    std::atomic<int> next{0};
    std::exception_ptr first_error;
    for (int t = 0; t < threads; ++t)
      pool.emplace_back([&] {
        try {
          for (int r = next.fetch_add(1); r < n_resamples; r = next.fetch_add(1))
            work(r);
        } catch (...) {
          std::lock_guard<std::mutex> lock(mu);
          if (!first_error) first_error = std::current_exception();
        }
      });
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
  }

  BootstrapResult out;
  out.accepted = static_cast<int>(accepted_curves.size());
  out.rejected = n_resamples - out.accepted;
  out.rejected_above_reference = rejected_above;
  out.rejected_fit_failure = rejected_fit;
  if (out.accepted == 0)
    throw NumericalError("bootstrap: zero accepted resamples");

  const std::size_t D = accepted_curves.front().size();
  out.mean_per_d.assign(D, 0.0);
  out.std_per_d.assign(D, 0.0);
  for (const auto& c : accepted_curves)
    for (std::size_t i = 0; i < D; ++i) out.mean_per_d[i] += c[i];
  for (std::size_t i = 0; i < D; ++i) out.mean_per_d[i] /= out.accepted;
  for (const auto& c : accepted_curves)
    for (std::size_t i = 0; i < D; ++i) {
      double d = c[i] - out.mean_per_d[i];
      out.std_per_d[i] += d * d;
    }
  for (std::size_t i = 0; i < D; ++i)
    out.std_per_d[i] = out.accepted > 1
                           ? std::sqrt(out.std_per_d[i] / (out.accepted - 1))
                           : 0.0;
  return out;
}

}  // namespace kqd
