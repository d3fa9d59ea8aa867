#include <benchmark/benchmark.h>

#include "kqd/circuit.hpp"
#include "kqd/krylov.hpp"
#include "kqd/prep.hpp"
#include "kqd/sector_state.hpp"
#include "kqd/solver.hpp"

using namespace kqd;

namespace {

ExperimentLayout bench_layout() {
  HeavyHex hh = build_heavy_hex(1, 2);
  PreparationTarget t;
  t.control = 10;
  t.particles = {1, 5, 11, 13, 17};
  return ExperimentLayout::make(hh.lattice, t);
}

void BM_rank_unrank(benchmark::State& state) {
  SectorBasis basis(24, 6);
  std::uint64_t i = 0;
  for (auto _ : state) {
    auto bits = basis.unrank(i % basis.dim());
    benchmark::DoNotOptimize(basis.rank(bits));
    ++i;
  }
}
BENCHMARK(BM_rank_unrank);

void BM_trotter_layer_sweep(benchmark::State& state) {
  ExperimentLayout layout = bench_layout();
  auto basis = make_sector_basis(layout.n_system(), layout.k());
  SectorState psi = SectorState::basis_state(basis, layout.psi0_bits);
  LayeredCircuit trotter = build_trotter(layout.system.lattice, 0.1, 2);
  for (auto _ : state) {
    apply_circuit(psi, trotter);
    benchmark::DoNotOptimize(psi.amplitudes().data());
  }
}
BENCHMARK(BM_trotter_layer_sweep);

void BM_exact_elements_d10(benchmark::State& state) {
  ExperimentLayout layout = bench_layout();
  for (auto _ : state) {
    auto pair = exact_elements(layout, 0.1, 2, 10);
    benchmark::DoNotOptimize(pair.H.data());
  }
}
BENCHMARK(BM_exact_elements_d10)->Unit(benchmark::kMillisecond);

void BM_prep_synthesis(benchmark::State& state) {
  HeavyHex hh = build_heavy_hex(2, 3);
  PreparationTarget t;
  t.control = choose_control_site(hh.lattice, {2, 14, 30});
  t.particles = {2, 14, 30};
  for (auto _ : state) {
    auto circ = synthesize_controlled_prep(hh.lattice, t);
    benchmark::DoNotOptimize(circ.layers.data());
  }
}
BENCHMARK(BM_prep_synthesis);

void BM_solve_regularized_d30(benchmark::State& state) {
  KrylovPair pair;
  pair.D = 30;
  pair.dt = 0.1;
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Random(30, 30);
  Eigen::MatrixXcd b = Eigen::MatrixXcd::Random(30, 30);
  pair.H = (a + a.adjoint()) / 2.0;
  pair.S = b * b.adjoint() / 30.0 + Eigen::MatrixXcd::Identity(30, 30) * 0.1;
  for (auto _ : state)
    benchmark::DoNotOptimize(solve_regularized(pair, 1e-6).energy);
}
BENCHMARK(BM_solve_regularized_d30);

}  // namespace

BENCHMARK_MAIN();
