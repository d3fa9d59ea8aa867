#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "kqd/io.hpp"
#include "kqd/krylov.hpp"
#include "kqd/noisy_run.hpp"
#include "kqd/solver.hpp"

namespace kqd {

// One experiment, fully determined by this record plus the master seed.
struct ExperimentConfig {
  std::string name = "experiment";
  std::uint64_t seed = 0;

  // lattice: generated heavy-hex (rows/cols), or a lattice file; `subset`
  // restricts to the listed sites. Site indices below (control, particles,
  // subset) always refer to the source lattice before renumbering.
  int rows = 0, cols = 0;
  std::string lattice_file;
  std::vector<int> subset;

  int control = -1;
  std::vector<int> particles;

  double dt = 0.1;
  int trotter_steps = 2;
  int trotter_order = 2;
  int krylov_dim = 10;
  std::string structure = "toeplitz";  // "hermitian" is exact-mode only
  std::string mode = "exact";          // exact | shots | noisy

  int shots = 500;
  int twirls = 100;
  std::vector<double> gains = {1.0, 1.3, 1.6};
  std::string noise_model_file;
  double uniform_noise_rate = 0.0;
  double readout_p01 = 0.0, readout_p10 = 0.0;
  int calib_shots = 20000;

  RegularizationConfig regularization;
  bool auto_reg = true;
  double fixed_eps_base = 1e-8;
  int bootstrap_resamples = 0;
  int threads = 1;

  // optional timestep sweep for the error heatmap
  bool sweep = false;
  double sweep_min = 0.0, sweep_max = 0.0;
  int sweep_points = 0;

  static ExperimentConfig from_json_text(const std::string& text);
  std::string to_json_text() const;  // canonical echo used for hashing
  void validate() const;
};

struct RunArtifacts {
  ExperimentLayout layout;
  KrylovPair pair;
  EnergyCurve curve;
  double eps_base = 0.0;
  std::optional<BootstrapResult> bootstrap;
  std::vector<io::HeatmapRow> heatmap;
  double reference_energy = 0.0;  // sector ground energy when computed
  bool have_reference = false;
};

// lattice -> circuits -> estimation -> solve (+ bootstrap, + sweep), without
// touching the filesystem.
RunArtifacts run_pipeline(const ExperimentConfig& cfg);

// run_pipeline plus the output bundle: pair file, curve CSV, bootstrap CSV,
// heatmap CSV and a manifest tying everything to the config hash.
struct RunOutputs {
  std::filesystem::path pair_file, curve_file, manifest_file;
  std::optional<std::filesystem::path> bootstrap_file, heatmap_file;
};
RunOutputs run_experiment(const ExperimentConfig& cfg,
                          const std::filesystem::path& out_dir);

// Per-D differences of two completed run directories.
void compare_runs(const std::filesystem::path& dir_a,
                  const std::filesystem::path& dir_b,
                  const std::filesystem::path& out_csv);

// Resolves the configured lattice/subset into a layout.
ExperimentLayout layout_from_config(const ExperimentConfig& cfg);

}  // namespace kqd
