#include <gtest/gtest.h>

#include <cmath>

#include "kqd/circuit.hpp"
#include "kqd/dense_state.hpp"
#include "kqd/errors.hpp"
#include "kqd/exp_fit.hpp"
#include "kqd/io.hpp"
#include "kqd/prep.hpp"
#include "test_support.hpp"

using namespace kqd;
using cplx = std::complex<double>;

TEST(Trotter, LayerCounts) {
  HeavyHex hh = build_heavy_hex(1, 1);
  EXPECT_EQ(build_trotter(hh.lattice, 0.1, 2, 2).layer_count(), 9);
  for (int n : {1, 3, 5})
    EXPECT_EQ(build_trotter(hh.lattice, 0.1, n, 2).layer_count(), 4 * n + 1);
  for (int n : {1, 2, 4})
    EXPECT_EQ(build_trotter(hh.lattice, 0.1, n, 1).layer_count(), 3 * n);
}

TEST(Trotter, SingleEdgeIsExact) {
  EdgeColoredLattice lat(2, {{0, 1}}, {1.0}, {EdgeColor::R});
  double t = 0.9;
  LayeredCircuit circ = build_trotter(lat, t, 1, 2);
  Eigen::MatrixXcd u = test::circuit_unitary(circ);
  Eigen::MatrixXcd h = dense_hamiltonian(hamiltonian_terms(lat), 2);
  EXPECT_NEAR((u - exact_unitary(h, t)).norm(), 0.0, 1e-12);
}

TEST(Trotter, SecondOrderConvergenceSlope) {
  Rng rng = make_rng(5);
  EdgeColoredLattice lat = test::random_heavy_hex_subgraph(rng, 6);
  const double t = 1.3;
  Eigen::MatrixXcd h = dense_hamiltonian(hamiltonian_terms(lat), lat.n_sites());
  Eigen::MatrixXcd u_exact = exact_unitary(h, t);

  std::vector<double> log_steps, log_err;
  for (int steps : {2, 4, 8, 16}) {
    Eigen::MatrixXcd u = test::circuit_unitary(build_trotter(lat, t, steps, 2));
    log_steps.push_back(std::log(static_cast<double>(steps)));
    log_err.push_back(std::log((u - u_exact).norm()));
  }
  LinearFit fit = fit_linear_weighted(log_steps, log_err, {});
  EXPECT_NEAR(fit.b, -2.0, 0.3);
}

TEST(Trotter, VacuumPhaseMatchesCouplingSum) {
  HeavyHex hh = build_heavy_hex(1, 2);
  double dt = 0.23;
  LayeredCircuit circ = build_trotter(hh.lattice, dt, 3, 2);
  double expected = -dt * hh.lattice.n_edges();  // uniform couplings
  EXPECT_NEAR(circ.vacuum_phase, expected, 1e-12);
  EXPECT_NEAR(vacuum_phase(circ), expected, 1e-12);
}

TEST(VacuumPhase, SingleEdgeRotation) {
  LayeredCircuit circ;
  circ.n_sites = 2;
  CircuitLayer layer;
  layer.color = EdgeColor::R;
  layer.gates.push_back({Gate::Kind::HeisenbergEdge, 0, 1, 0.41});
  circ.append_layer(layer);
  EXPECT_NEAR(circ.vacuum_phase, -0.41, 1e-15);
}

TEST(VacuumPhase, CxLayersAreTrivial) {
  LayeredCircuit circ;
  circ.n_sites = 3;
  CircuitLayer layer;
  layer.color = EdgeColor::G;
  layer.gates.push_back({Gate::Kind::CX, 0, 1, 0.0});
  circ.append_layer(layer);
  EXPECT_EQ(vacuum_phase(circ), 0.0);
}

TEST(VacuumPhase, MatchesDenseSimulation) {
  // two second-order sweeps on a 3-edge lattice
  EdgeColoredLattice lat(4, {{0, 1}, {1, 2}, {2, 3}}, {1.0, 0.7, 1.3},
                         {EdgeColor::R, EdgeColor::G, EdgeColor::B});
  double dt = 0.35;
  LayeredCircuit circ = build_trotter(lat, dt, 2, 2);
  DenseState vac = DenseState::vacuum(4);
  apply_circuit(vac, circ);
  cplx expected = std::exp(cplx(0, circ.vacuum_phase));
  EXPECT_NEAR(std::abs(vac.amplitudes()[0] - expected), 0.0, 1e-12);
  EXPECT_NEAR(circ.vacuum_phase, -dt * (1.0 + 0.7 + 1.3), 1e-12);
}

namespace {
// |0...0> + |control=1, particles=1> against the synthesized circuit
void verify_prep(const EdgeColoredLattice& lat, const PreparationTarget& t) {
  LayeredCircuit circ = synthesize_controlled_prep(lat, t);

  std::uint64_t s_bits = 1ull << t.control;
  for (int p : t.particles) s_bits |= 1ull << p;

  DenseState st = DenseState::vacuum(lat.n_sites());
  apply_hadamard(st, t.control);
  apply_circuit(st, circ);

  Eigen::VectorXcd expected = Eigen::VectorXcd::Zero(1ll << lat.n_sites());
  expected[0] = 1 / std::sqrt(2.0);
  expected[static_cast<Eigen::Index>(s_bits)] = 1 / std::sqrt(2.0);
  ASSERT_NEAR((st.amplitudes() - expected).norm(), 0.0, 1e-12)
      << "n=" << lat.n_sites() << " control=" << t.control;

  int bound = prep_layer_bound(excitation_spread(lat, t));
  EXPECT_LE(circ.layer_count(), bound);
}
}  // namespace

TEST(ControlledPrep, SingleParticleAdjacentIsOneLayer) {
  HeavyHex hh = build_heavy_hex(1, 1);
  PreparationTarget t;
  t.control = 0;
  t.particles = {hh.lattice.neighbors(0)[0]};
  LayeredCircuit circ = synthesize_controlled_prep(hh.lattice, t);
  EXPECT_EQ(circ.layer_count(), 1);
  verify_prep(hh.lattice, t);
}

TEST(ControlledPrep, AdjacentParticlesRejected) {
  HeavyHex hh = build_heavy_hex(1, 1);
  PreparationTarget t;
  t.control = 5;
  t.particles = {0, 1};  // adjacent chain sites
  EXPECT_THROW(synthesize_controlled_prep(hh.lattice, t), ValidationError);
}

TEST(ControlledPrep, DisconnectedParticlesRejected) {
  EdgeColoredLattice lat(4, {{0, 1}}, {1.0}, {EdgeColor::R});
  PreparationTarget t;
  t.control = 0;
  t.particles = {3};  // isolated site
  EXPECT_THROW(synthesize_controlled_prep(lat, t), ValidationError);
}

TEST(ControlledPrep, SingleHexAllTargets) {
  HeavyHex hh = build_heavy_hex(1, 1);
  for (int p = 1; p < hh.lattice.n_sites(); ++p) {
    PreparationTarget t;
    t.particles = {p};
    t.control = 0;
    verify_prep(hh.lattice, t);
  }
}

TEST(ControlledPrep, RandomizedInstances) {
  Rng rng = make_rng(101);
  for (int trial = 0; trial < 120; ++trial) {
    auto inst = test::random_instance(rng, 12, 1 + trial % 4);
    verify_prep(inst.lattice, inst.target);
  }
}

TEST(ControlledPrep, LayersAreFullColorClasses) {
  // padded layers act on every edge of their color except transient 1-1 pairs
  HeavyHex hh = build_heavy_hex(1, 2);
  PreparationTarget t;
  t.particles = {1, 5, 13, 17};
  t.control = choose_control_site(hh.lattice, t.particles);
  LayeredCircuit circ = synthesize_controlled_prep(hh.lattice, t);
  int full = 0;
  for (const auto& layer : circ.layers) {
    ASSERT_TRUE(layer.color.has_value());
    if (layer.gates.size() == hh.lattice.edges_of_color(*layer.color).size())
      ++full;
  }
  EXPECT_GE(full, circ.layer_count() - 1);
}

TEST(ChooseControl, PrefersCentralSite) {
  HeavyHex hh = build_heavy_hex(1, 1);
  auto d0 = hh.lattice.distances_from(0);
  int far = static_cast<int>(std::max_element(d0.begin(), d0.end()) - d0.begin());
  int control = choose_control_site(hh.lattice, {0, far});
  auto dc = hh.lattice.distances_from(control);
  int depth = std::max(dc[0], dc[far]);
  EXPECT_LE(depth, (d0[far] + 1) / 2 + 1);
}

TEST(CircuitIo, DumpContainsLayers) {
  HeavyHex hh = build_heavy_hex(1, 1);
  LayeredCircuit circ = build_trotter(hh.lattice, 0.2, 1, 2);
  std::string text = io::circuit_to_json(circ);
  EXPECT_NE(text.find("vacuum_phase"), std::string::npos);
  EXPECT_NE(text.find("HEIS"), std::string::npos);
}

TEST(SectorApply, RejectsCx) {
  auto basis = make_sector_basis(2, 1);
  SectorState s = SectorState::basis_state(basis, 0b01);
  LayeredCircuit circ;
  circ.n_sites = 2;
  CircuitLayer layer;
  layer.gates.push_back({Gate::Kind::CX, 0, 1, 0.0});
  circ.append_layer(layer);
  EXPECT_THROW(apply_circuit(s, circ), ValidationError);
}
