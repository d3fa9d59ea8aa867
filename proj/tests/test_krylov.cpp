#include <gtest/gtest.h>

#include <cmath>

#include "kqd/errors.hpp"
#include "kqd/io.hpp"
#include "kqd/krylov.hpp"
#include "kqd/measurement.hpp"
#include "test_support.hpp"

using namespace kqd;
using cplx = std::complex<double>;

namespace {
ExperimentLayout tiny_layout() {
  // 3-site path: control 0, particle on 1, system {1,2} with one edge
  EdgeColoredLattice lat(3, {{0, 1}, {1, 2}}, {1.0, 1.0},
                         {EdgeColor::R, EdgeColor::G});
  PreparationTarget t;
  t.control = 0;
  t.particles = {1};
  return ExperimentLayout::make(lat, t);
}

double classical_reference(const ExperimentLayout& lay) {
  auto terms = hamiltonian_terms(lay.system.lattice);
  return basis_state_expectation(terms, lay.psi0_bits);
}
}  // namespace

TEST(ExactElements, DimensionOne) {
  ExperimentLayout lay = test::numerics_layout_20q();
  KrylovPair pair = exact_elements(lay, 0.3, 2, 1);
  EXPECT_EQ(pair.D, 1);
  EXPECT_NEAR(pair.S(0, 0).real(), 1.0, 0.0);
  EXPECT_NEAR(pair.H(0, 0).real(), classical_reference(lay), 1e-12);
}

TEST(ExactElements, ZeroTimestep) {
  ExperimentLayout lay = tiny_layout();
  KrylovPair pair = exact_elements(lay, 0.0, 2, 4);
  for (int j = 0; j < 4; ++j)
    for (int k = 0; k < 4; ++k) {
      EXPECT_NEAR(std::abs(pair.S(j, k) - cplx(1.0)), 0.0, 1e-13);
      EXPECT_NEAR(std::abs(pair.H(j, k) - pair.H(0, 0)), 0.0, 1e-13);
    }
}

TEST(ExactElements, SingleEdgeMatchesDenseOracle) {
  // one edge: the Trotter step is the exact evolution
  ExperimentLayout lay = tiny_layout();
  const double dt = 0.6;
  const int D = 3;
  KrylovPair pair = exact_elements(lay, dt, 1, D);

  auto terms = hamiltonian_terms(lay.system.lattice);
  Eigen::MatrixXcd h = dense_hamiltonian(terms, 2);
  Eigen::MatrixXcd u = exact_unitary(h, dt);
  Eigen::VectorXcd psi0 = Eigen::VectorXcd::Zero(4);
  psi0[lay.psi0_bits] = 1.0;
  for (int d = 0; d < D; ++d) {
    Eigen::VectorXcd psid = psi0;
    for (int r = 0; r < d; ++r) psid = u * psid;
    cplx expected_s = psi0.dot(psid);
    cplx expected_m = (h * psi0).eval().dot(psid);
    EXPECT_NEAR(std::abs(pair.S(0, d) - expected_s), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(pair.H(0, d) - expected_m), 0.0, 1e-12);
  }
}

TEST(ExactElements, ToeplitzStructureHolds) {
  ExperimentLayout lay = test::numerics_layout_20q();
  KrylovPair pair = exact_elements(lay, 0.15, 2, 6);
  ASSERT_EQ(pair.structure, PairStructure::Toeplitz);
  for (int j = 0; j < 6; ++j)
    for (int k = 0; k < 6; ++k) {
      EXPECT_EQ(pair.H(j, k), j <= k ? pair.H(0, k - j) : std::conj(pair.H(0, j - k)));
      EXPECT_EQ(pair.S(j, k), j <= k ? pair.S(0, k - j) : std::conj(pair.S(0, j - k)));
    }
  EXPECT_LE((pair.H - pair.H.adjoint()).norm(), 1e-12);
  EXPECT_LE((pair.S - pair.S.adjoint()).norm(), 1e-12);
}

TEST(ExactElements, OverlapPositiveSemidefinite) {
  ExperimentLayout lay = test::numerics_layout_20q();
  KrylovPair pair = exact_elements(lay, 0.2, 2, 8);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(pair.S);
  EXPECT_GE(es.eigenvalues()(0), -1e-10);
}

TEST(HermitianElements, MatchesToeplitzForExactEvolution) {
  // dense-exponential oracle: with the exact U both pencils coincide
  Rng rng = make_rng(71);
  auto inst = test::random_instance(rng, 9, 2);
  ExperimentLayout lay = ExperimentLayout::make(inst.lattice, inst.target);
  const int n = lay.n_system();
  ASSERT_LE(n, 10);
  const double dt = 0.4;
  const int D = 4;

  auto terms = hamiltonian_terms(lay.system.lattice);
  Eigen::MatrixXcd h = dense_hamiltonian(terms, n);
  Eigen::MatrixXcd u = exact_unitary(h, dt);
  Eigen::VectorXcd psi0 = Eigen::VectorXcd::Zero(1 << n);
  psi0[static_cast<Eigen::Index>(lay.psi0_bits)] = 1.0;

  std::vector<Eigen::VectorXcd> psi{psi0};
  for (int d = 1; d < D; ++d) psi.push_back(u * psi[d - 1]);

  Eigen::MatrixXcd h_toep(D, D), s_toep(D, D), h_herm(D, D), s_herm(D, D);
  for (int j = 0; j < D; ++j)
    for (int k = 0; k < D; ++k) {
      h_herm(j, k) = psi[j].dot(h * psi[k]);
      s_herm(j, k) = psi[j].dot(psi[k]);
      int d = std::abs(k - j);
      cplx m = psi[0].dot(h * psi[d]);
      cplx s = psi[0].dot(psi[d]);
      h_toep(j, k) = k >= j ? m : std::conj(m);
      s_toep(j, k) = k >= j ? s : std::conj(s);
    }
  EXPECT_LE((h_toep - h_herm).norm(), 1e-10);
  EXPECT_LE((s_toep - s_herm).norm(), 1e-10);
}

TEST(HermitianElements, DimensionOneMatchesToeplitz) {
  ExperimentLayout lay = tiny_layout();
  KrylovPair a = exact_elements(lay, 0.3, 2, 1);
  KrylovPair b = exact_elements_hermitian(lay, 0.3, 2, 1);
  EXPECT_NEAR(std::abs(a.H(0, 0) - b.H(0, 0)), 0.0, 1e-13);
  EXPECT_NEAR(std::abs(a.S(0, 0) - b.S(0, 0)), 0.0, 1e-13);
}

TEST(HermitianElements, CoarseTrotterSplitsTheVariants) {
  Rng rng = make_rng(73);
  EdgeColoredLattice lat = test::random_heavy_hex_subgraph(rng, 7);
  auto particles = test::random_nonadjacent_particles(rng, lat, 2);
  ASSERT_FALSE(particles.empty());
  PreparationTarget t;
  t.control = choose_control_site(lat, particles);
  t.particles = particles;
  ExperimentLayout lay = ExperimentLayout::make(lat, t);

  KrylovPair toep = exact_elements(lay, 1.2, 1, 5);
  KrylovPair herm = exact_elements_hermitian(lay, 1.2, 1, 5);
  double max_diff = (toep.H - herm.H).cwiseAbs().maxCoeff();
  EXPECT_GT(max_diff, 1e-6);
}

TEST(HadamardTest, IdentityAtDistanceZero) {
  ExperimentLayout lay = tiny_layout();
  MeasurementPlan plan = build_measurement_plan(lay.full, lay.target);
  HadamardExpectations he = hadamard_test_expectations(lay, plan, 0.5, 1, 2);
  // <X (x) conjugated-identity> at d=0 reads off Re<psi0|psi0> = 1
  EXPECT_NEAR(plan.observables[plan.overlap_obs_x].sign *
                  he.values[0][plan.overlap_obs_x],
              1.0, 1e-12);
  EXPECT_NEAR(plan.observables[plan.overlap_obs_y].sign *
                  he.values[0][plan.overlap_obs_y],
              0.0, 1e-12);
}

TEST(HadamardTest, DistanceZeroDiagonalConsistency) {
  // reconstructing d=0 from the readout values reproduces <psi0|H|psi0>
  ExperimentLayout lay = test::numerics_layout_20q();
  MeasurementPlan plan = build_measurement_plan(lay.full, lay.target);
  HadamardExpectations he = hadamard_test_expectations(lay, plan, 0.4, 2, 1);
  cplx m0 = 0;
  std::vector<cplx> z(plan.terms.size());
  for (std::size_t i = 0; i < plan.terms.size(); ++i) {
    if (plan.value_copy_from[i] >= 0) continue;
    double re = plan.observables[plan.obs_x_of_term[i]].sign *
                he.values[0][plan.obs_x_of_term[i]];
    double im = plan.observables[plan.obs_y_of_term[i]].sign *
                he.values[0][plan.obs_y_of_term[i]];
    z[i] = cplx(re, im);
  }
  for (std::size_t i = 0; i < plan.terms.size(); ++i)
    if (plan.value_copy_from[i] >= 0) z[i] = z[plan.value_copy_from[i]];
  for (std::size_t i = 0; i < plan.terms.size(); ++i)
    m0 += plan.terms[i].coefficient * z[i];
  EXPECT_NEAR(m0.real(), classical_reference(lay), 1e-10);
  EXPECT_NEAR(m0.imag(), 0.0, 1e-10);
}

TEST(HadamardTest, CrossPathEquivalence) {
  Rng rng = make_rng(79);
  for (int trial = 0; trial < 8; ++trial) {
    auto inst = test::random_instance(rng, 14, 3);
    ExperimentLayout lay = ExperimentLayout::make(inst.lattice, inst.target);
    const double dt = 0.2 + 0.2 * uniform01(rng);
    const int D = 4;
    MeasurementPlan plan = build_measurement_plan(lay.full, lay.target);
    HadamardExpectations he = hadamard_test_expectations(lay, plan, dt, 2, D);
    Provenance prov;
    KrylovPair rec =
        pair_from_observable_values(lay, plan, he.values, he.phase, dt, prov);
    KrylovPair direct = exact_elements(lay, dt, 2, D);
    EXPECT_LE((rec.H - direct.H).cwiseAbs().maxCoeff(), 1e-10);
    EXPECT_LE((rec.S - direct.S).cwiseAbs().maxCoeff(), 1e-10);
  }
}

TEST(SampleShots, CertainOutcomeIsExact) {
  ExperimentLayout lay = tiny_layout();
  MeasurementPlan plan = build_measurement_plan(lay.full, lay.target);
  HadamardExpectations he = hadamard_test_expectations(lay, plan, 0.0, 1, 2);
  ShotData data = sample_shots(he, plan, 64, 9);
  auto est = estimates_from_shots(plan, data);
  // dt = 0: the overlap observable is pinned at 1 for every distance
  EXPECT_EQ(est[1][plan.overlap_obs_x] * plan.observables[plan.overlap_obs_x].sign,
            1.0);
}

TEST(SampleShots, UnbiasedNearZero) {
  // expectation 0 estimated with 1e6 shots stays within 5 sigma
  ExperimentLayout lay = tiny_layout();
  MeasurementPlan plan = build_measurement_plan(lay.full, lay.target);
  HadamardExpectations he = hadamard_test_expectations(lay, plan, 0.0, 1, 1);
  for (auto& v : he.values[0]) v = 0.0;
  ShotData data = sample_shots(he, plan, 1000000, 13);
  auto est = estimates_from_shots(plan, data);
  for (double v : est[0]) EXPECT_LE(std::abs(v), 5e-3);
}

TEST(SampleShots, DeterministicReruns) {
  ExperimentLayout lay = tiny_layout();
  MeasurementPlan plan = build_measurement_plan(lay.full, lay.target);
  HadamardExpectations he = hadamard_test_expectations(lay, plan, 0.5, 1, 3);
  ShotData a = sample_shots(he, plan, 500, 12345);
  ShotData b = sample_shots(he, plan, 500, 12345);
  EXPECT_EQ(a.counts, b.counts);
  ShotData c = sample_shots(he, plan, 500, 54321);
  EXPECT_NE(a.counts, c.counts);
}

TEST(SampleShots, ZeroShotsRejected) {
  ExperimentLayout lay = tiny_layout();
  MeasurementPlan plan = build_measurement_plan(lay.full, lay.target);
  HadamardExpectations he = hadamard_test_expectations(lay, plan, 0.5, 1, 2);
  EXPECT_THROW(sample_shots(he, plan, 0, 1), ValidationError);
}

TEST(SampleShots, ErrorScalesAsInverseSqrtShots) {
  ExperimentLayout lay = test::numerics_layout_20q();
  MeasurementPlan plan = build_measurement_plan(lay.full, lay.target);
  const double dt = 0.3;
  HadamardExpectations he = hadamard_test_expectations(lay, plan, dt, 2, 4);
  KrylovPair exact = exact_elements(lay, dt, 2, 4);

  auto mean_err = [&](int shots) {
    double acc = 0;
    const int reps = 12;
    for (int seed = 0; seed < reps; ++seed) {
      ShotData data = sample_shots(he, plan, shots, 1000 + seed);
      Provenance prov;
      prov.mode = Provenance::Mode::Shots;
      KrylovPair rec = pair_from_observable_values(
          lay, plan, estimates_from_shots(plan, data), he.phase, dt, prov);
      acc += (rec.H - exact.H).cwiseAbs().mean();
    }
    return acc / reps;
  };
  double e1 = mean_err(250);
  double e2 = mean_err(4000);  // 16x shots -> ideally 4x smaller error
  double ratio = e1 / e2;
  EXPECT_GT(ratio, 2.0);
  EXPECT_LT(ratio, 8.0);
}

TEST(Resample, PreservesCountsRange) {
  ExperimentLayout lay = tiny_layout();
  MeasurementPlan plan = build_measurement_plan(lay.full, lay.target);
  HadamardExpectations he = hadamard_test_expectations(lay, plan, 0.5, 1, 3);
  ShotData data = sample_shots(he, plan, 100, 5);
  Rng rng = make_rng(6);
  ShotData re = resample_shots(data, rng);
  for (std::size_t d = 0; d < re.counts.size(); ++d)
    for (std::size_t b = 0; b < re.counts[d].size(); ++b)
      for (std::size_t s = 0; s < re.counts[d][b].size(); ++s) {
        EXPECT_GE(re.counts[d][b][s], 0);
        EXPECT_LE(re.counts[d][b][s], 100);
      }
}

TEST(PairIo, RoundTrip) {
  ExperimentLayout lay = tiny_layout();
  KrylovPair pair = exact_elements(lay, 0.4, 2, 3);
  pair.provenance.mode = Provenance::Mode::Exact;
  KrylovPair back = io::pair_from_json(io::pair_to_json(pair));
  EXPECT_EQ(back.D, pair.D);
  EXPECT_EQ(back.structure, pair.structure);
  EXPECT_LE((back.H - pair.H).norm(), 0.0);
  EXPECT_LE((back.S - pair.S).norm(), 0.0);
}
