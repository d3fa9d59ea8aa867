#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "kqd/circuit.hpp"
#include "kqd/krylov.hpp"
#include "kqd/lattice.hpp"
#include "kqd/noise.hpp"
#include "kqd/solver.hpp"

namespace kqd::io {

// shortest round-trip decimal; identical inputs give identical bytes
std::string format_double(double v);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

std::string lattice_to_json(const EdgeColoredLattice& lat,
                            const std::vector<HeavyHexCoord>* coords = nullptr);
EdgeColoredLattice lattice_from_json(const std::string& text);

std::string circuit_to_json(const LayeredCircuit& circ);

std::string pair_to_json(const KrylovPair& pair);
KrylovPair pair_from_json(const std::string& text);

std::string noise_models_to_json(
    const std::array<PauliLindbladModel, 3>& models);
std::array<PauliLindbladModel, 3> noise_models_from_json(const std::string& text,
                                                         int n_sites);

// D,energy,threshold,std,accepted_resamples (std fields empty without a
// bootstrap); n_sites > 0 appends an energy_per_site column
std::string curve_csv(const EnergyCurve& curve,
                      const BootstrapResult* bootstrap = nullptr,
                      int n_sites = 0);

// dt,D,energy,error rows for the timestep sweep
struct HeatmapRow {
  double dt;
  int D;
  double energy;
  double error;
};
std::string heatmap_csv(const std::vector<HeatmapRow>& rows);

std::string compare_csv(const KrylovPair& a, const KrylovPair& b,
                        const EnergyCurve& curve_a, const EnergyCurve& curve_b);

std::uint64_t fnv1a(const std::string& text);

}  // namespace kqd::io
