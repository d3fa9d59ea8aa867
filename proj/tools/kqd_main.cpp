// kqd: Krylov quantum diagonalization laboratory.
//
// Subcommands: lattice gen|subset, circuit synth|trotter, krylov estimate,
// solve, noise run, run, compare. Exit codes: 0 success, 1 invalid input,
// 2 numerical failure.

#include <CLI11.hpp>
#include <algorithm>
#include <filesystem>
#include <iostream>

#include "kqd/errors.hpp"
#include "kqd/experiment.hpp"
#include "kqd/io.hpp"
#include "kqd/prep.hpp"

namespace fs = std::filesystem;
using namespace kqd;

namespace {

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty() || out_path == "-")
    std::cout << text;
  else
    io::write_text_file(out_path, text);
}

ExperimentConfig load_config(const std::string& path) {
  ExperimentConfig cfg = ExperimentConfig::from_json_text(io::read_text_file(path));
  // file references resolve against the config's own directory
  fs::path noise(cfg.noise_model_file);
  if (!cfg.noise_model_file.empty() && noise.is_relative())
    cfg.noise_model_file = (fs::path(path).parent_path() / noise).string();
  fs::path lat(cfg.lattice_file);
  if (!cfg.lattice_file.empty() && lat.is_relative())
    cfg.lattice_file = (fs::path(path).parent_path() / lat).string();
  return cfg;
}

int run_all(CLI::App& app, int argc, char** argv) {
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const NumericalError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Krylov quantum diagonalization laboratory"};
  app.require_subcommand(1);

  // ---- lattice ----
  auto* lattice = app.add_subcommand("lattice", "build and slice lattices");
  lattice->require_subcommand(1);

  auto* gen = lattice->add_subcommand("gen", "generate a heavy-hex lattice");
  int rows = 1, cols = 1;
  std::string out_path;
  gen->add_option("--rows", rows, "hexagon rows")->required();
  gen->add_option("--cols", cols, "hexagon columns")->required();
  gen->add_option("-o,--out", out_path, "output file (default stdout)");
  gen->callback([&] {
    HeavyHex hh = build_heavy_hex(rows, cols);
    emit(io::lattice_to_json(hh.lattice, &hh.coords), out_path);
  });

  auto* subset = lattice->add_subcommand("subset", "induced sublattice");
  std::string in_path;
  std::vector<int> sites;
  subset->add_option("-i,--in", in_path, "lattice file")->required();
  subset->add_option("--sites", sites, "sites to keep")->required()->delimiter(',');
  subset->add_option("-o,--out", out_path, "output file (default stdout)");
  subset->callback([&] {
    auto lat = io::lattice_from_json(io::read_text_file(in_path));
    Sublattice sub = induced_sublattice(lat, sites);
    if (!sub.connected) std::cerr << "warning: " << sub.warning << "\n";
    emit(io::lattice_to_json(sub.lattice), out_path);
  });

  // ---- circuit ----
  auto* circuit = app.add_subcommand("circuit", "synthesize circuits");
  circuit->require_subcommand(1);

  auto* synth = circuit->add_subcommand(
      "synth", "controlled preparation over the color layers");
  std::string lat_path;
  int control = 0;
  std::vector<int> particles;
  synth->add_option("--lattice", lat_path, "lattice file")->required();
  synth->add_option("--control", control, "control site")->required();
  synth->add_option("--particles", particles, "particle sites")->required()->delimiter(',');
  synth->add_option("-o,--out", out_path, "output file (default stdout)");
  synth->callback([&] {
    auto lat = io::lattice_from_json(io::read_text_file(lat_path));
    PreparationTarget t;
    t.control = control;
    t.particles = particles;
    std::sort(t.particles.begin(), t.particles.end());
    emit(io::circuit_to_json(synthesize_controlled_prep(lat, t)), out_path);
  });

  auto* trot = circuit->add_subcommand("trotter", "layered time evolution");
  double dt = 0.1;
  int steps = 2, order = 2;
  trot->add_option("--lattice", lat_path, "lattice file")->required();
  trot->add_option("--dt", dt, "timestep")->required();
  trot->add_option("--steps", steps, "Trotter steps");
  trot->add_option("--order", order, "product formula order (1 or 2)");
  trot->add_option("-o,--out", out_path, "output file (default stdout)");
  trot->callback([&] {
    auto lat = io::lattice_from_json(io::read_text_file(lat_path));
    emit(io::circuit_to_json(build_trotter(lat, dt, steps, order)), out_path);
  });

  // ---- krylov ----
  auto* krylov = app.add_subcommand("krylov", "matrix pencil estimation");
  krylov->require_subcommand(1);
  auto* estimate = krylov->add_subcommand("estimate", "estimate (H,S)");
  std::string config_path, mode_override;
  estimate->add_option("--config", config_path, "experiment config file")
      ->required();
  estimate->add_option("--mode", mode_override, "exact | shots | noisy");
  estimate->add_option("-o,--out", out_path, "output file (default stdout)");
  estimate->callback([&] {
    ExperimentConfig cfg = load_config(config_path);
    if (!mode_override.empty()) cfg.mode = mode_override;
    cfg.bootstrap_resamples = 0;
    cfg.sweep = false;
    cfg.validate();
    emit(io::pair_to_json(run_pipeline(cfg).pair), out_path);
  });

  // ---- solve ----
  auto* solve = app.add_subcommand("solve", "regularized energy curve");
  std::string pair_path;
  bool auto_reg_flag = false;
  double eps_base = 1e-8;
  int bootstrap_n = -1;
  solve->add_option("--config", config_path,
                    "experiment config (re-runs estimation)");
  solve->add_option("--pair", pair_path, "pair file (no bootstrap)");
  solve->add_flag("--auto-reg", auto_reg_flag, "threshold search");
  solve->add_option("--eps-base", eps_base, "fixed threshold per dimension");
  solve->add_option("--bootstrap", bootstrap_n, "bootstrap resamples");
  solve->add_option("-o,--out", out_path, "output file (default stdout)");
  solve->callback([&] {
    if (config_path.empty() == pair_path.empty())
      throw ValidationError("solve: pass exactly one of --config/--pair");
    if (!config_path.empty()) {
      ExperimentConfig cfg = load_config(config_path);
      if (auto_reg_flag) cfg.auto_reg = true;
      if (bootstrap_n >= 0) cfg.bootstrap_resamples = bootstrap_n;
      cfg.validate();
      RunArtifacts art = run_pipeline(cfg);
      emit(io::curve_csv(art.curve,
                         art.bootstrap ? &art.bootstrap.value() : nullptr,
                         art.layout.n_system()),
           out_path);
      return;
    }
    KrylovPair pair = io::pair_from_json(io::read_text_file(pair_path));
    if (bootstrap_n > 0)
      throw ValidationError("solve: bootstrap needs --config (shot data)");
    EnergyCurve curve;
    if (auto_reg_flag) {
      RegularizationConfig reg;
      curve = auto_regularize(pair, reg).curve;
    } else {
      curve = energy_curve(pair, eps_base);
      if (curve.defined_dims().empty())
        throw NumericalError("solve: empty retained subspace at every dimension");
    }
    emit(io::curve_csv(curve), out_path);
  });

  // ---- noise ----
  auto* noise = app.add_subcommand("noise", "noisy emulation");
  noise->require_subcommand(1);
  auto* nrun = noise->add_subcommand("run", "trajectories + mitigation");
  std::vector<double> gains;
  int twirls = -1, shots = -1;
  std::string out_dir = "out";
  nrun->add_option("--config", config_path, "experiment config file")->required();
  nrun->add_option("--gains", gains, "noise gains (>= 1)")->delimiter(',');
  nrun->add_option("--twirls", twirls, "twirled instances per basis");
  nrun->add_option("--shots", shots, "shots per instance");
  nrun->add_option("--out-dir", out_dir, "output directory");
  nrun->callback([&] {
    ExperimentConfig cfg = load_config(config_path);
    cfg.mode = "noisy";
    if (!gains.empty()) cfg.gains = gains;
    if (twirls > 0) cfg.twirls = twirls;
    if (shots > 0) cfg.shots = shots;
    cfg.validate();
    RunOutputs outs = run_experiment(cfg, out_dir);
    std::cout << "wrote " << outs.manifest_file.string() << "\n";
  });

  // ---- run ----
  auto* run = app.add_subcommand("run", "full pipeline from a config");
  int threads_override = -1;
  run->add_option("--config", config_path, "experiment config file")->required();
  run->add_option("--out-dir", out_dir, "output directory")->required();
  run->add_option("--threads", threads_override, "worker cap");
  run->callback([&] {
    ExperimentConfig cfg = load_config(config_path);
    if (threads_override >= 0) cfg.threads = threads_override;
    RunOutputs outs = run_experiment(cfg, out_dir);
    std::cout << "wrote " << outs.manifest_file.string() << "\n";
  });

  // ---- compare ----
  auto* compare = app.add_subcommand("compare", "diff two run directories");
  std::string dir_a, dir_b;
  compare->add_option("--a", dir_a, "first run directory")->required();
  compare->add_option("--b", dir_b, "second run directory")->required();
  compare->add_option("-o,--out", out_path, "output CSV")->required();
  compare->callback([&] { compare_runs(dir_a, dir_b, out_path); });

  return run_all(app, argc, argv);
}
