#include <gtest/gtest.h>

#include <filesystem>

#include "kqd/errors.hpp"
#include "kqd/experiment.hpp"
#include "kqd/io.hpp"
#include "test_support.hpp"

using namespace kqd;
namespace fs = std::filesystem;

namespace {
const char* kMiniExact = R"({
  "name": "mini",
  "seed": 11,
  "lattice": {"rows": 1, "cols": 1},
  "control": 0,
  "particles": [2, 7],
  "dt": 0.3,
  "trotter_steps": 2,
  "krylov_dim": 5,
  "mode": "exact",
  "regularization": {"auto": false, "eps_base": 1e-10}
})";

fs::path temp_dir(const std::string& tag) {
  fs::path p = fs::temp_directory_path() / ("kqd_test_" + tag);
  fs::remove_all(p);
  return p;
}
}  // namespace

TEST(Config, ParsesAndEchoes) {
  ExperimentConfig cfg = ExperimentConfig::from_json_text(kMiniExact);
  EXPECT_EQ(cfg.name, "mini");
  EXPECT_EQ(cfg.seed, 11u);
  EXPECT_EQ(cfg.krylov_dim, 5);
  EXPECT_FALSE(cfg.auto_reg);
  ExperimentConfig back = ExperimentConfig::from_json_text(cfg.to_json_text());
  EXPECT_EQ(back.to_json_text(), cfg.to_json_text());
}

TEST(Config, FieldLevelValidationMessages) {
  auto expect_message = [](const char* text, const char* needle) {
    try {
      ExperimentConfig::from_json_text(text);
      FAIL() << "expected rejection for " << needle;
    } catch (const ValidationError& e) {
      EXPECT_NE(std::string(e.what()).find(needle), std::string::npos)
          << e.what();
    }
  };
  expect_message(R"({"lattice":{"rows":1,"cols":1},"control":0,"particles":[2]})",
                 "config.seed");
  expect_message(
      R"({"seed":1,"lattice":{"rows":1,"cols":1},"control":0,"particles":[2],"krylov_dim":0})",
      "config.krylov_dim");
  expect_message(
      R"({"seed":1,"lattice":{"rows":1,"cols":1},"control":0,"particles":[2],"mode":"maybe"})",
      "config.mode");
  expect_message(
      R"({"seed":1,"lattice":{"rows":1,"cols":1},"control":0,"particles":[2],"mode":"shots","structure":"hermitian"})",
      "config.structure");
  expect_message(
      R"({"seed":1,"lattice":{"rows":1,"cols":1},"control":0,"particles":[2],"bootstrap_resamples":10})",
      "config.bootstrap_resamples");
}

TEST(Config, PresetsParseAndValidate) {
  for (const char* name :
       {"fig3-k5", "fig3c-dtsweep", "k1-noiseless-56", "k3-noiseless-44",
        "k5-noiseless-42", "noisy-8q-k1"}) {
    SCOPED_TRACE(name);
    fs::path p = fs::path(KQD_SOURCE_DIR) / "presets" / (std::string(name) + ".json");
    ExperimentConfig cfg =
        ExperimentConfig::from_json_text(io::read_text_file(p));
    ExperimentLayout lay = layout_from_config(cfg);
    EXPECT_TRUE(lay.system.connected);
  }
}

TEST(Config, PresetRegisterSizes) {
  auto system_size = [](const char* name) {
    fs::path p = fs::path(KQD_SOURCE_DIR) / "presets" / (std::string(name) + ".json");
    ExperimentConfig cfg =
        ExperimentConfig::from_json_text(io::read_text_file(p));
    return layout_from_config(cfg).n_system();
  };
  EXPECT_EQ(system_size("k1-noiseless-56"), 56);
  EXPECT_EQ(system_size("k3-noiseless-44"), 44);
  EXPECT_EQ(system_size("k5-noiseless-42"), 42);
  EXPECT_EQ(system_size("fig3-k5"), 20);
  EXPECT_EQ(system_size("noisy-8q-k1"), 8);
}

TEST(RunPipeline, ExactMiniProducesCurve) {
  ExperimentConfig cfg = ExperimentConfig::from_json_text(kMiniExact);
  RunArtifacts art = run_pipeline(cfg);
  EXPECT_EQ(art.pair.D, 5);
  ASSERT_EQ(art.curve.energy.size(), 5u);
  EXPECT_TRUE(art.curve.defined[0]);
  EXPECT_NEAR(art.curve.energy[0], art.pair.H(0, 0).real(), 1e-10);
}

TEST(RunPipeline, ShotsModeWithBootstrap) {
  ExperimentConfig cfg = ExperimentConfig::from_json_text(kMiniExact);
  cfg.mode = "shots";
  cfg.shots = 300;
  cfg.bootstrap_resamples = 30;
  cfg.validate();
  RunArtifacts art = run_pipeline(cfg);
  ASSERT_TRUE(art.bootstrap.has_value());
  EXPECT_EQ(art.bootstrap->accepted + art.bootstrap->rejected, 30);
  EXPECT_GT(art.bootstrap->accepted, 0);
}

TEST(RunExperiment, WritesBundleAndManifest) {
  ExperimentConfig cfg = ExperimentConfig::from_json_text(kMiniExact);
  fs::path dir = temp_dir("bundle");
  RunOutputs outs = run_experiment(cfg, dir);
  EXPECT_TRUE(fs::exists(outs.pair_file));
  EXPECT_TRUE(fs::exists(outs.curve_file));
  EXPECT_TRUE(fs::exists(outs.manifest_file));
  std::string manifest = io::read_text_file(outs.manifest_file);
  EXPECT_NE(manifest.find("config_hash"), std::string::npos);
  std::string curve = io::read_text_file(outs.curve_file);
  EXPECT_EQ(curve.rfind("D,energy,threshold,std,accepted_resamples", 0), 0u);
  fs::remove_all(dir);
}

TEST(RunExperiment, DeterministicReruns) {
  for (const char* mode : {"exact", "shots"}) {
    ExperimentConfig cfg = ExperimentConfig::from_json_text(kMiniExact);
    cfg.mode = mode;
    if (cfg.mode == "shots") {
      cfg.shots = 200;
      cfg.bootstrap_resamples = 10;
    }
    cfg.validate();
    fs::path a = temp_dir(std::string("det_a_") + mode);
    fs::path b = temp_dir(std::string("det_b_") + mode);
    run_experiment(cfg, a);
    run_experiment(cfg, b);
    EXPECT_EQ(io::read_text_file(a / "curve.csv"), io::read_text_file(b / "curve.csv"));
    EXPECT_EQ(io::read_text_file(a / "pair.json"), io::read_text_file(b / "pair.json"));
    fs::remove_all(a);
    fs::remove_all(b);
  }
}

TEST(CompareRuns, SelfComparisonIsZero) {
  ExperimentConfig cfg = ExperimentConfig::from_json_text(kMiniExact);
  fs::path a = temp_dir("cmp_a");
  run_experiment(cfg, a);
  fs::path out = temp_dir("cmp_out") / "compare.csv";
  compare_runs(a, a, out);
  std::string text = io::read_text_file(out);
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);  // header
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::string c;
    std::istringstream ls(line);
    while (std::getline(ls, c, ',')) cells.push_back(c);
    ASSERT_EQ(cells.size(), 6u);
    EXPECT_DOUBLE_EQ(std::stod(cells[3]), 0.0);
    EXPECT_DOUBLE_EQ(std::stod(cells[4]), 0.0);
    EXPECT_DOUBLE_EQ(std::stod(cells[5]), 0.0);
  }
  fs::remove_all(a);
  fs::remove_all(out.parent_path());
}

TEST(CompareRuns, ExactVsInfiniteShotReconstruction) {
  ExperimentConfig cfg = ExperimentConfig::from_json_text(kMiniExact);
  fs::path a = temp_dir("cmp2_a");
  run_experiment(cfg, a);

  // reconstruct the pair from exact readout values, write a run-shaped dir
  ExperimentLayout lay = layout_from_config(cfg);
  MeasurementPlan plan = build_measurement_plan(lay.full, lay.target);
  HadamardExpectations he = hadamard_test_expectations(
      lay, plan, cfg.dt, cfg.trotter_steps, cfg.krylov_dim);
  Provenance prov;
  prov.mode = Provenance::Mode::Shots;
  KrylovPair rec =
      pair_from_observable_values(lay, plan, he.values, he.phase, cfg.dt, prov);
  fs::path b = temp_dir("cmp2_b");
  fs::create_directories(b);
  io::write_text_file(b / "pair.json", io::pair_to_json(rec));
  io::write_text_file(
      b / "curve.csv",
      io::curve_csv(energy_curve(rec, cfg.fixed_eps_base), nullptr));

  fs::path out = temp_dir("cmp2_out") / "compare.csv";
  compare_runs(a, b, out);
  std::string text = io::read_text_file(out);
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::string c;
    std::istringstream ls(line);
    while (std::getline(ls, c, ',')) cells.push_back(c);
    ASSERT_EQ(cells.size(), 6u);
    EXPECT_LE(std::abs(std::stod(cells[3])), 1e-10);
    EXPECT_LE(std::stod(cells[4]), 1e-10);
    EXPECT_LE(std::stod(cells[5]), 1e-10);
  }
  fs::remove_all(a);
  fs::remove_all(b);
  fs::remove_all(out.parent_path());
}

TEST(SweepHeatmap, RowsCoverGridAndDimensions) {
  ExperimentConfig cfg = ExperimentConfig::from_json_text(kMiniExact);
  cfg.sweep = true;
  cfg.sweep_min = 0.1;
  cfg.sweep_max = 0.4;
  cfg.sweep_points = 3;
  cfg.validate();
  RunArtifacts art = run_pipeline(cfg);
  EXPECT_TRUE(art.have_reference);
  EXPECT_EQ(art.heatmap.size(), 3u * cfg.krylov_dim);
  for (const auto& row : art.heatmap)
    EXPECT_NEAR(row.error, row.energy - art.reference_energy, 1e-12);
}
