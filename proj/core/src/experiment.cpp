#include "kqd/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>

#include <json.hpp>

#include "kqd/errors.hpp"
#include "kqd/prep.hpp"

namespace kqd {

using nlohmann::json;

namespace {
constexpr const char* kVersion = "0.1.0";

template <typename T>
void read_field(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}
}  // namespace

ExperimentConfig ExperimentConfig::from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("config: not valid JSON: ") + e.what());
  }
  ExperimentConfig c;
  try {
    read_field(j, "name", c.name);
    if (!j.contains("seed"))
      throw ValidationError("config.seed: master seed is mandatory");
    c.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("lattice")) {
      const json& l = j.at("lattice");
      read_field(l, "rows", c.rows);
      read_field(l, "cols", c.cols);
      read_field(l, "file", c.lattice_file);
      read_field(l, "subset", c.subset);
    }
    read_field(j, "control", c.control);
    read_field(j, "particles", c.particles);
    read_field(j, "dt", c.dt);
    read_field(j, "trotter_steps", c.trotter_steps);
    read_field(j, "trotter_order", c.trotter_order);
    read_field(j, "krylov_dim", c.krylov_dim);
    read_field(j, "structure", c.structure);
    read_field(j, "mode", c.mode);
    read_field(j, "shots", c.shots);
    read_field(j, "twirls", c.twirls);
    read_field(j, "gains", c.gains);
    if (j.contains("noise")) {
      const json& n = j.at("noise");
      read_field(n, "file", c.noise_model_file);
      read_field(n, "uniform_rate", c.uniform_noise_rate);
      read_field(n, "readout_p01", c.readout_p01);
      read_field(n, "readout_p10", c.readout_p10);
      read_field(n, "calib_shots", c.calib_shots);
    }
    if (j.contains("regularization")) {
      const json& r = j.at("regularization");
      read_field(r, "eps_init_base", c.regularization.eps_init_base);
      read_field(r, "search_factor", c.regularization.search_factor);
      read_field(r, "fit_rms_tol", c.regularization.fit_rms_tol);
      read_field(r, "max_threshold", c.regularization.max_threshold);
      read_field(r, "auto", c.auto_reg);
      read_field(r, "eps_base", c.fixed_eps_base);
    }
    read_field(j, "bootstrap_resamples", c.bootstrap_resamples);
    read_field(j, "threads", c.threads);
    if (j.contains("dt_sweep")) {
      const json& s = j.at("dt_sweep");
      c.sweep = true;
      read_field(s, "min", c.sweep_min);
      read_field(s, "max", c.sweep_max);
      read_field(s, "points", c.sweep_points);
    }
  } catch (const json::exception& e) {
    throw ValidationError(std::string("config: ") + e.what());
  }
  c.validate();
  return c;
}

std::string ExperimentConfig::to_json_text() const {
  json j;
  j["name"] = name;
  j["seed"] = seed;
  json l;
  if (!lattice_file.empty()) l["file"] = lattice_file;
  if (rows > 0) {
    l["rows"] = rows;
    l["cols"] = cols;
  }
  if (!subset.empty()) l["subset"] = subset;
  j["lattice"] = std::move(l);
  j["control"] = control;
  j["particles"] = particles;
  j["dt"] = dt;
  j["trotter_steps"] = trotter_steps;
  j["trotter_order"] = trotter_order;
  j["krylov_dim"] = krylov_dim;
  j["structure"] = structure;
  j["mode"] = mode;
  if (mode != "exact") {
    j["shots"] = shots;
    j["twirls"] = twirls;
  }
  if (mode == "noisy") {
    j["gains"] = gains;
    json n;
    if (!noise_model_file.empty()) n["file"] = noise_model_file;
    n["uniform_rate"] = uniform_noise_rate;
    n["readout_p01"] = readout_p01;
    n["readout_p10"] = readout_p10;
    n["calib_shots"] = calib_shots;
    j["noise"] = std::move(n);
  }
  json r;
  r["eps_init_base"] = regularization.eps_init_base;
  r["search_factor"] = regularization.search_factor;
  r["fit_rms_tol"] = regularization.fit_rms_tol;
  r["max_threshold"] = regularization.max_threshold;
  r["auto"] = auto_reg;
  r["eps_base"] = fixed_eps_base;
  j["regularization"] = std::move(r);
  j["bootstrap_resamples"] = bootstrap_resamples;
  j["threads"] = threads;
  if (sweep) {
    json s;
    s["min"] = sweep_min;
    s["max"] = sweep_max;
    s["points"] = sweep_points;
    j["dt_sweep"] = std::move(s);
  }
  return j.dump(2) + "\n";
}

void ExperimentConfig::validate() const {
  if (lattice_file.empty() && (rows < 1 || cols < 1))
    throw ValidationError("config.lattice: set rows/cols >= 1 or a file");
  if (control < 0) throw ValidationError("config.control: required");
  if (particles.empty()) throw ValidationError("config.particles: required");
  if (!std::isfinite(dt)) throw ValidationError("config.dt: must be finite");
  if (trotter_steps < 1)
    throw ValidationError("config.trotter_steps: must be >= 1");
  if (trotter_order != 1 && trotter_order != 2)
    throw ValidationError("config.trotter_order: must be 1 or 2");
  if (krylov_dim < 1) throw ValidationError("config.krylov_dim: must be >= 1");
  if (structure != "toeplitz" && structure != "hermitian")
    throw ValidationError("config.structure: toeplitz or hermitian");
  if (mode != "exact" && mode != "shots" && mode != "noisy")
    throw ValidationError("config.mode: exact, shots or noisy");
  if (structure == "hermitian" && mode != "exact")
    throw ValidationError(
        "config.structure: the hermitian pencil is exact-mode only");
  if (mode != "exact" && shots < 1)
    throw ValidationError("config.shots: must be >= 1");
  if (mode == "noisy") {
    if (twirls < 1) throw ValidationError("config.twirls: must be >= 1");
    if (gains.size() < 2)
      throw ValidationError("config.gains: need at least two gains");
  }
  if (bootstrap_resamples > 0 && mode == "exact")
    throw ValidationError(
        "config.bootstrap_resamples: bootstrap needs shot-level data");
  if (bootstrap_resamples < 0)
    throw ValidationError("config.bootstrap_resamples: must be >= 0");
  if (sweep && (sweep_points < 2 || !(sweep_min > 0) || !(sweep_max > sweep_min)))
    throw ValidationError("config.dt_sweep: need 0 < min < max, points >= 2");
  regularization.validate();
}

ExperimentLayout layout_from_config(const ExperimentConfig& cfg) {
  EdgeColoredLattice lat;
  if (!cfg.lattice_file.empty())
    lat = io::lattice_from_json(io::read_text_file(cfg.lattice_file));
  else
    lat = build_heavy_hex(cfg.rows, cfg.cols).lattice;

  int control = cfg.control;
  std::vector<int> particles = cfg.particles;
  if (!cfg.subset.empty()) {
    Sublattice sub = induced_sublattice(lat, cfg.subset);
    if (!sub.connected)
      throw ValidationError("config.lattice.subset: " + sub.warning);
    auto remap = [&](int site, const char* what) {
      if (site < 0 || site >= lat.n_sites() || sub.old_to_new[site] < 0)
        throw ValidationError(std::string("config.") + what +
                              ": site not in subset");
      return sub.old_to_new[site];
    };
    control = remap(control, "control");
    for (int& p : particles) p = remap(p, "particles");
    lat = sub.lattice;
  }
  std::sort(particles.begin(), particles.end());

  PreparationTarget target;
  target.control = control;
  target.particles = std::move(particles);
  return ExperimentLayout::make(std::move(lat), std::move(target));
}

namespace {

NoisyRunConfig noisy_config(const ExperimentConfig& cfg,
                            const ExperimentLayout& layout) {
  NoisyRunConfig nc;
  nc.gains = cfg.gains;
  nc.twirls = cfg.twirls;
  nc.shots = cfg.shots;
  nc.calib_shots = cfg.calib_shots;
  nc.seed = derive_seed(cfg.seed, {11});
  nc.threads = cfg.threads;
  if (!cfg.noise_model_file.empty()) {
    nc.layer_models = io::noise_models_from_json(
        io::read_text_file(cfg.noise_model_file), layout.full.n_sites());
  } else {
    for (int c = 0; c < 3; ++c)
      nc.layer_models[c] = uniform_edge_model(
          layout.full, static_cast<EdgeColor>(c), cfg.uniform_noise_rate);
  }
  nc.readout = ReadoutModel::uniform(layout.full.n_sites(), cfg.readout_p01,
                                     cfg.readout_p10);
  return nc;
}

}  // namespace

RunArtifacts run_pipeline(const ExperimentConfig& cfg) {
  cfg.validate();
  RunArtifacts art;
  art.layout = layout_from_config(cfg);
  const ExperimentLayout& layout = art.layout;
  const int D = cfg.krylov_dim;

  std::optional<PairRebuild> rebuild;

  if (cfg.mode == "exact") {
    art.pair = cfg.structure == "hermitian"
                   ? exact_elements_hermitian(layout, cfg.dt, cfg.trotter_steps,
                                              D, cfg.trotter_order)
                   : exact_elements(layout, cfg.dt, cfg.trotter_steps, D,
                                    cfg.trotter_order);
  } else if (cfg.mode == "shots") {
    MeasurementPlan plan = build_measurement_plan(layout.full, layout.target);
    HadamardExpectations exact = hadamard_test_expectations(
        layout, plan, cfg.dt, cfg.trotter_steps, D, cfg.trotter_order);
    ShotData data =
        sample_shots(exact, plan, cfg.shots, derive_seed(cfg.seed, {10}));
    Provenance prov;
    prov.mode = Provenance::Mode::Shots;
    prov.n_shots = cfg.shots;
    prov.seed = data.seed;
    art.pair = pair_from_observable_values(
        layout, plan, estimates_from_shots(plan, data), exact.phase, cfg.dt,
        prov);
    rebuild = [layout, plan, data, exact, dt = cfg.dt, prov](Rng& rng) {
      ShotData re = resample_shots(data, rng);
      return pair_from_observable_values(
          layout, plan, estimates_from_shots(plan, re), exact.phase, dt, prov);
    };
  } else {
    NoisyRunConfig nc = noisy_config(cfg, layout);
    NoisyRunResult nr =
        noisy_krylov_run(layout, cfg.dt, cfg.trotter_steps, D, nc,
                         cfg.trotter_order);
    art.pair = nr.extrapolated;
    rebuild = [layout, plan = nr.plan, table = nr.table,
               lambda = nr.trex_lambda, phase = nr.phase, gains = nc.gains,
               dt = cfg.dt](Rng& rng) {
      NoisyShotTable re = resample_table(table, rng);
      return extrapolated_pair_from_table(layout, plan, re, lambda, phase,
                                          gains, dt);
    };
  }

  if (cfg.auto_reg) {
    AutoRegResult ar = auto_regularize(art.pair, cfg.regularization);
    art.eps_base = ar.eps_base;
    art.curve = std::move(ar.curve);
  } else {
    art.eps_base = cfg.fixed_eps_base;
    art.curve = energy_curve(art.pair, cfg.fixed_eps_base);
    if (art.curve.defined_dims().empty())
      throw NumericalError("energy curve: empty retained subspace at every dimension");
  }

  if (cfg.bootstrap_resamples > 0 && rebuild) {
    art.bootstrap =
        bootstrap(*rebuild, cfg.bootstrap_resamples, cfg.regularization,
                  derive_seed(cfg.seed, {12}), cfg.threads);
  }

  if (cfg.sweep) {
    art.reference_energy =
        sector_ground_energy(layout.system.lattice, layout.k());
    art.have_reference = true;
    for (int i = 0; i < cfg.sweep_points; ++i) {
      double f = static_cast<double>(i) / (cfg.sweep_points - 1);
      double dt = std::exp(std::log(cfg.sweep_min) +
                           f * (std::log(cfg.sweep_max) - std::log(cfg.sweep_min)));
      KrylovPair pair =
          exact_elements(layout, dt, cfg.trotter_steps, D, cfg.trotter_order);
      EnergyCurve curve = energy_curve(pair, cfg.auto_reg
                                                 ? cfg.regularization.eps_init_base
                                                 : cfg.fixed_eps_base);
      for (int dp = 1; dp <= D; ++dp) {
        if (!curve.defined[dp - 1]) continue;
        art.heatmap.push_back({dt, dp, curve.energy[dp - 1],
                               curve.energy[dp - 1] - art.reference_energy});
      }
    }
  }
  return art;
}

RunOutputs run_experiment(const ExperimentConfig& cfg,
                          const std::filesystem::path& out_dir) {
  auto t0 = std::chrono::steady_clock::now();
  RunArtifacts art = run_pipeline(cfg);
  auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                std::chrono::steady_clock::now() - t0)
                .count();

  std::filesystem::create_directories(out_dir);
  RunOutputs out;
  out.pair_file = out_dir / "pair.json";
  out.curve_file = out_dir / "curve.csv";
  out.manifest_file = out_dir / "manifest.json";

  io::write_text_file(out.pair_file, io::pair_to_json(art.pair));
  io::write_text_file(
      out.curve_file,
      io::curve_csv(art.curve,
                    art.bootstrap ? &art.bootstrap.value() : nullptr,
                    art.layout.n_system()));
  if (art.bootstrap) {
    out.bootstrap_file = out_dir / "bootstrap.csv";
    std::ostringstream bs;
    bs << "D,mean,std,accepted,rejected,rejected_above_reference,"
          "rejected_fit_failure\n";
    for (std::size_t i = 0; i < art.bootstrap->std_per_d.size(); ++i)
      bs << (i + 1) << "," << io::format_double(art.bootstrap->mean_per_d[i])
         << "," << io::format_double(art.bootstrap->std_per_d[i]) << ","
         << art.bootstrap->accepted << "," << art.bootstrap->rejected << ","
         << art.bootstrap->rejected_above_reference << ","
         << art.bootstrap->rejected_fit_failure << "\n";
    io::write_text_file(*out.bootstrap_file, bs.str());
  }
  if (!art.heatmap.empty()) {
    out.heatmap_file = out_dir / "heatmap.csv";
    io::write_text_file(*out.heatmap_file, io::heatmap_csv(art.heatmap));
  }

  const std::string echo = cfg.to_json_text();
  json manifest;
  manifest["config"] = json::parse(echo);
  manifest["config_hash"] = io::fnv1a(echo);
  manifest["version"] = kVersion;
  manifest["seed"] = cfg.seed;
  manifest["eps_base"] = art.eps_base;
  manifest["wall_time_ms"] = ms;
  json files = json::array();
  files.push_back(out.pair_file.filename().string());
  files.push_back(out.curve_file.filename().string());
  if (out.bootstrap_file) files.push_back(out.bootstrap_file->filename().string());
  if (out.heatmap_file) files.push_back(out.heatmap_file->filename().string());
  manifest["outputs"] = std::move(files);
  if (art.have_reference)
    manifest["reference_energy"] = art.reference_energy;
  io::write_text_file(out.manifest_file, manifest.dump(2) + "\n");
  return out;
}

namespace {
std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> row;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) row.push_back(cell);
    rows.push_back(std::move(row));
  }
  return rows;
}
}  // namespace

void compare_runs(const std::filesystem::path& dir_a,
                  const std::filesystem::path& dir_b,
                  const std::filesystem::path& out_csv) {
  KrylovPair pa = io::pair_from_json(io::read_text_file(dir_a / "pair.json"));
  KrylovPair pb = io::pair_from_json(io::read_text_file(dir_b / "pair.json"));
  if (pa.D != pb.D)
    throw ValidationError("compare: runs have different Krylov dimensions");

  auto curve_of = [](const std::filesystem::path& dir) {
    auto rows = parse_csv(io::read_text_file(dir / "curve.csv"));
    EnergyCurve c;
    for (std::size_t i = 1; i < rows.size(); ++i) {
      const auto& r = rows[i];
      bool ok = r.size() > 1 && !r[1].empty();
      c.energy.push_back(ok ? std::stod(r[1]) : 0.0);
      c.threshold.push_back(r.size() > 2 && !r[2].empty() ? std::stod(r[2]) : 0.0);
      c.defined.push_back(ok ? 1 : 0);
    }
    return c;
  };
  EnergyCurve ca = curve_of(dir_a), cb = curve_of(dir_b);
  if (ca.energy.size() != cb.energy.size())
    throw ValidationError("compare: runs have different curve lengths");
  io::write_text_file(out_csv, io::compare_csv(pa, pb, ca, cb));
}

}  // namespace kqd
