#include "kqd/noisy_run.hpp"

#include <atomic>
#include <bit>
#include <cmath>
#include <mutex>
#include <thread>

#include "kqd/circuit.hpp"
#include "kqd/errors.hpp"
#include "kqd/prep.hpp"

namespace kqd {

void NoisyRunConfig::validate(int n_sites) const {
  if (gains.empty()) throw ValidationError("noisy run: no gains");
  for (double g : gains)
    if (g < 1.0) throw ValidationError("noisy run: gains must be >= 1");
  if (twirls < 1) throw ValidationError("noisy run: twirls must be >= 1");
  if (shots < 1) throw ValidationError("noisy run: shots must be >= 1");
  if (n_sites > dense_cap)
    throw NumericalError("noisy run: register exceeds the dense backend cap");
  for (const auto& m : layer_models) m.validate(n_sites);
  readout.validate(n_sites);
}

NoisyShotTable resample_table(const NoisyShotTable& table, Rng& rng) {
  NoisyShotTable out = table;
  for (std::size_t g = 0; g < table.groups.size(); ++g) {
    const auto& src = table.groups[g];
    if (src.empty()) continue;
    auto& dst = out.groups[g];
    for (std::size_t s = 0; s < src.size(); ++s)
      dst[s] = src[uniform_index(rng, src.size())];
  }
  return out;
}

namespace {

std::vector<std::uint64_t> observable_masks(const MeasurementPlan& plan) {
  std::vector<std::uint64_t> masks;
  masks.reserve(plan.observables.size());
  for (const auto& o : plan.observables) masks.push_back(o.measured.x_mask() |
                                                         o.measured.z_mask());
  return masks;
}

double parity_mean(const std::vector<std::uint16_t>& bits, std::uint64_t mask) {
  if (bits.empty()) return 0.0;
  std::int64_t acc = 0;
  for (std::uint16_t b : bits)
    acc += (std::popcount(static_cast<unsigned>(b & mask)) & 1) ? -1 : 1;
  return static_cast<double>(acc) / static_cast<double>(bits.size());
}

}  // namespace

GainEstimates aggregate_table(const MeasurementPlan& plan,
                              const NoisyShotTable& table) {
  const std::size_t n_obs = plan.observables.size();
  auto masks = observable_masks(plan);

  GainEstimates est;
  est.mean.assign(table.n_gains,
                  std::vector<std::vector<double>>(
                      table.D, std::vector<double>(n_obs, 0.0)));
  est.std = est.mean;

  for (int g = 0; g < table.n_gains; ++g)
    for (int d = 1; d < table.D; ++d)
      for (std::size_t b = 0; b < plan.bases.size(); ++b)
        for (int o_slot : plan.bases[b].covered) {
          // per-twirl means, then mean and std of the aggregate
          double m1 = 0, m2 = 0;
          for (int t = 0; t < table.twirls; ++t) {
            double v = parity_mean(
                table.groups[table.index(g, d, static_cast<int>(b), t)],
                masks[o_slot]);
            m1 += v;
            m2 += v * v;
          }
          m1 /= table.twirls;
          m2 /= table.twirls;
          double var = std::max(0.0, m2 - m1 * m1);
          double sem = table.twirls > 1
                           ? std::sqrt(var / (table.twirls - 1))
                           : 0.0;
          est.mean[g][d][o_slot] += m1;
          est.std[g][d][o_slot] += sem;
        }

  // average over the bases covering each observable
  std::vector<int> cover(n_obs, 0);
  for (const auto& b : plan.bases)
    for (int o : b.covered) ++cover[o];
  for (int g = 0; g < table.n_gains; ++g)
    for (int d = 1; d < table.D; ++d)
      for (std::size_t o = 0; o < n_obs; ++o)
        if (cover[o] > 0) {
          est.mean[g][d][o] /= cover[o];
          est.std[g][d][o] /= cover[o];
        }
  return est;
}

namespace {

std::vector<std::vector<double>> mitigate_values(
    const GainEstimates& est, const std::vector<double>& lambda, int g) {
  auto values = est.mean[g];
  for (auto& per_d : values)
    for (std::size_t o = 0; o < per_d.size(); ++o)
      per_d[o] = trex_mitigate(per_d[o], lambda[o]);
  return values;
}

}  // namespace

KrylovPair extrapolated_pair_from_table(
    const ExperimentLayout& layout, const MeasurementPlan& plan,
    const NoisyShotTable& table, const std::vector<double>& trex_lambda,
    const std::vector<double>& phase, const std::vector<double>& gains,
    double dt) {
  GainEstimates est = aggregate_table(plan, table);
  const std::size_t n_obs = plan.observables.size();

  std::vector<std::vector<double>> values(table.D,
                                          std::vector<double>(n_obs, 0.0));
  for (int d = 1; d < table.D; ++d)
    for (std::size_t o = 0; o < n_obs; ++o) {
      std::vector<double> means(gains.size()), stds(gains.size());
      for (std::size_t g = 0; g < gains.size(); ++g) {
        means[g] = trex_mitigate(est.mean[g][d][o], trex_lambda[o]);
        stds[g] = est.std[g][d][o] / std::abs(trex_lambda[o]);
      }
      values[d][o] = std::clamp(extrapolate(gains, means, stds).value, -1.0, 1.0);
    }

  Provenance prov;
  prov.mode = Provenance::Mode::Noisy;
  prov.gains = gains;
  prov.n_shots = table.shots;
  prov.twirls = table.twirls;
  return pair_from_observable_values(layout, plan, values, phase, dt, prov);
}

NoisyRunResult noisy_krylov_run(const ExperimentLayout& layout, double dt,
                                int steps, int D, const NoisyRunConfig& cfg,
                                int order) {
  const int n = layout.full.n_sites();
  cfg.validate(n);

  NoisyRunResult res;
  res.plan = build_measurement_plan(layout.full, layout.target);
  const std::size_t n_obs = res.plan.observables.size();
  const int n_gains = static_cast<int>(cfg.gains.size());
  const int n_bases = static_cast<int>(res.plan.bases.size());

  LayeredCircuit prep = synthesize_controlled_prep(layout.full, layout.target);
  LayeredCircuit trotter = build_trotter(layout.evolution, dt, steps, order);
  res.phase.resize(D);
  for (int d = 0; d < D; ++d) res.phase[d] = d * trotter.vacuum_phase;

  res.table.n_gains = n_gains;
  res.table.D = D;
  res.table.n_bases = n_bases;
  res.table.twirls = cfg.twirls;
  res.table.shots = cfg.shots;
  res.table.groups.assign(
      static_cast<std::size_t>(n_gains) * D * n_bases * cfg.twirls, {});

  const std::uint64_t full_mask = (n == 64) ? ~0ull : ((1ull << n) - 1);

  // trajectory = (gain, distance, twirl); derived streams keep parallel
  // execution reproducible
  struct Task {
    int g, d, t;
  };
  std::vector<Task> tasks;
  for (int g = 0; g < n_gains; ++g)
    for (int d = 1; d < D; ++d)
      for (int t = 0; t < cfg.twirls; ++t) tasks.push_back({g, d, t});

  auto run_task = [&](const Task& task) {
    Rng rng = make_rng(cfg.seed, {1, static_cast<std::uint64_t>(task.g),
                                  static_cast<std::uint64_t>(task.d),
                                  static_cast<std::uint64_t>(task.t)});
    DenseState st = DenseState::vacuum(n, cfg.dense_cap);
    apply_hadamard(st, layout.target.control);

    auto run_layers = [&](const LayeredCircuit& circ) {
      for (const auto& layer : circ.layers) {
        const auto& model = cfg.layer_models[static_cast<int>(*layer.color)];
        PauliString err = sample_error(model, cfg.gains[task.g], rng);
        if (err.weight() > 0) apply_pauli(st, err);
        for (const Gate& gate : layer.gates) {
          if (gate.kind == Gate::Kind::CX)
            apply_cx(st, gate.a, gate.b);
          else
            apply_heisenberg_edge(st, gate.a, gate.b, gate.angle);
        }
      }
    };
    run_layers(prep);
    for (int rep = 0; rep < task.d; ++rep) run_layers(trotter);

    for (int b = 0; b < n_bases; ++b) {
      DenseState meas = st;
      for (int q = 0; q < n; ++q)
        rotate_to_basis(meas, q, res.plan.bases[b].setting[q]);
      std::uint64_t mask = rng() & full_mask;
      auto true_bits = sample_bits(meas, rng, cfg.shots);
      auto& group = res.table.groups[res.table.index(task.g, task.d, b, task.t)];
      group.resize(cfg.shots);
      for (int s = 0; s < cfg.shots; ++s)
        group[s] = static_cast<std::uint16_t>(
            readout_shot(cfg.readout, n, true_bits[s], mask, rng));
    }
  };

  const int threads = std::max(1, cfg.threads);
  if (threads == 1) {
    for (const auto& t : tasks) run_task(t);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    std::mutex err_mu;
    std::exception_ptr first_error;
    for (int w = 0; w < threads; ++w)
      pool.emplace_back([&] {
        try {
          for (std::size_t i = next.fetch_add(1); i < tasks.size();
               i = next.fetch_add(1))
            run_task(tasks[i]);
        } catch (...) {
          std::lock_guard<std::mutex> lock(err_mu);
          if (!first_error) first_error = std::current_exception();
        }
      });
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
  }

  // readout calibration: twirled vacuum shots, one lambda per observable
  auto masks = observable_masks(res.plan);
  res.trex_lambda.assign(n_obs, 1.0);
  {
    Rng rng = make_rng(cfg.seed, {2});
    std::vector<std::uint16_t> calib(cfg.calib_shots);
    for (int s = 0; s < cfg.calib_shots; ++s) {
      std::uint64_t mask = rng() & full_mask;
      calib[s] = static_cast<std::uint16_t>(
          readout_shot(cfg.readout, n, 0, mask, rng));
    }
    for (std::size_t o = 0; o < n_obs; ++o)
      res.trex_lambda[o] = parity_mean(calib, masks[o]);
  }

  GainEstimates est = aggregate_table(res.plan, res.table);

  Provenance base_prov;
  base_prov.mode = Provenance::Mode::Noisy;
  base_prov.seed = cfg.seed;
  base_prov.n_shots = cfg.shots;
  base_prov.twirls = cfg.twirls;
  base_prov.gains = cfg.gains;

  for (int g = 0; g < n_gains; ++g) {
    Provenance prov = base_prov;
    prov.gains = {cfg.gains[g]};
    res.per_gain.push_back(pair_from_observable_values(
        layout, res.plan, mitigate_values(est, res.trex_lambda, g), res.phase,
        dt, prov));
  }
  {
    Provenance prov = base_prov;
    prov.gains = {cfg.gains[0]};
    prov.noise_model = "unmitigated";
    res.unmitigated = pair_from_observable_values(layout, res.plan, est.mean[0],
                                                  res.phase, dt, prov);
  }

  // extrapolation with fit-method bookkeeping
  {
    std::vector<std::vector<double>> values(D, std::vector<double>(n_obs, 0.0));
    for (int d = 1; d < D; ++d)
      for (std::size_t o = 0; o < n_obs; ++o) {
        std::vector<double> means(cfg.gains.size()), stds(cfg.gains.size());
        for (std::size_t g = 0; g < cfg.gains.size(); ++g) {
          means[g] = trex_mitigate(est.mean[g][d][o], res.trex_lambda[o]);
          stds[g] = est.std[g][d][o] / std::abs(res.trex_lambda[o]);
        }
        ExtrapolationResult ex = extrapolate(cfg.gains, means, stds);
        if (ex.method == ExtrapolationResult::Method::Exponential)
          ++res.exponential_fits;
        else
          ++res.linear_fits;
        values[d][o] = std::clamp(ex.value, -1.0, 1.0);
      }
    Provenance prov = base_prov;
    prov.noise_model = "pea+trex";
    res.extrapolated =
        pair_from_observable_values(layout, res.plan, values, res.phase, dt, prov);
  }
  return res;
}

}  // namespace kqd
