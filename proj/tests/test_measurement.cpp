#include <gtest/gtest.h>

#include "kqd/dense_state.hpp"
#include "kqd/errors.hpp"
#include "kqd/measurement.hpp"
#include "test_support.hpp"

using namespace kqd;

namespace {
// conjugation by CX(0,1) on a labelled two-site operator
std::pair<std::string, double> cx_conj(const std::string& label) {
  PauliString p = PauliString::from_label(label);
  p.conjugate_cx(0, 1);
  double sign = p.sign();
  return {p.label(), sign};
}
}  // namespace

TEST(CxConjugation, SixIdentities) {
  EXPECT_EQ(cx_conj("XX"), (std::pair<std::string, double>{"XI", 1.0}));
  EXPECT_EQ(cx_conj("XI"), (std::pair<std::string, double>{"XX", 1.0}));
  EXPECT_EQ(cx_conj("YI"), (std::pair<std::string, double>{"YX", 1.0}));
  EXPECT_EQ(cx_conj("YX"), (std::pair<std::string, double>{"YI", 1.0}));
  EXPECT_EQ(cx_conj("XZ"), (std::pair<std::string, double>{"YY", -1.0}));
  EXPECT_EQ(cx_conj("YZ"), (std::pair<std::string, double>{"XY", 1.0}));
}

TEST(CxConjugation, InvolutionOnRandomStrings) {
  Rng rng = make_rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    PauliString p(4);
    for (int q = 0; q < 4; ++q)
      p.set_op(q, static_cast<PauliOp>(uniform_index(rng, 4)));
    PauliString orig = p;
    int c = static_cast<int>(uniform_index(rng, 4));
    int t = (c + 1 + static_cast<int>(uniform_index(rng, 3))) % 4;
    p.conjugate_cx(c, t);
    p.conjugate_cx(c, t);
    EXPECT_EQ(p, orig);
  }
}

TEST(CxConjugation, MatchesDenseConjugation) {
  // CX P CX on random strings, checked against the dense action
  Rng rng = make_rng(17);
  const int n = 3;
  for (int trial = 0; trial < 50; ++trial) {
    PauliString p(n);
    for (int q = 0; q < n; ++q)
      p.set_op(q, static_cast<PauliOp>(uniform_index(rng, 4)));
    int c = static_cast<int>(uniform_index(rng, n));
    int t = (c + 1 + static_cast<int>(uniform_index(rng, n - 1))) % n;

    PauliString conj = p;
    conj.conjugate_cx(c, t);

    for (std::uint64_t col = 0; col < (1u << n); ++col) {
      DenseState st = DenseState::basis_state(n, col);
      apply_cx(st, c, t);
      apply_pauli(st, p);
      apply_cx(st, c, t);
      DenseState direct = DenseState::basis_state(n, col);
      apply_pauli(direct, conj);
      ASSERT_NEAR((st.amplitudes() - direct.amplitudes()).norm(), 0.0, 1e-13);
    }
  }
}

TEST(ConjugateObservables, NoParticlesLeavesTermsUnchanged) {
  PreparationTarget t;
  t.control = 2;
  t.particles = {};  // degenerate case
  std::vector<PauliTerm> terms{{1.0, PauliString::from_label("XXI")}};
  auto obs = conjugate_observables(terms, PauliOp::X, t, 3);
  ASSERT_EQ(obs.size(), 2u);
  EXPECT_EQ(obs[0].measured.label(), "XXX");  // only the ancilla letter added
  EXPECT_EQ(obs[0].sign, 1.0);
}

TEST(ConjugateObservables, TermSpanningTwoParticlesRejected) {
  PreparationTarget t;
  t.control = 0;
  t.particles = {1, 3};
  std::vector<PauliTerm> bad{{1.0, PauliString::from_label("IZIZ")}};
  EXPECT_THROW(conjugate_observables(bad, PauliOp::X, t, 4), ValidationError);
}

TEST(ConjugateObservables, MatchesDenseOnRandomStates) {
  Rng rng = make_rng(41);
  HeavyHex hh = build_heavy_hex(1, 1);
  Sublattice sub =
      induced_sublattice(hh.lattice, std::vector<int>{0, 1, 2, 3, 4, 5, 6, 7});
  const EdgeColoredLattice& lat = sub.lattice;
  const int n = lat.n_sites();

  PreparationTarget t;
  t.control = 0;
  t.particles = {2, 5};
  ASSERT_FALSE(lat.adjacent(2, 5));

  auto terms = hamiltonian_terms_excluding(lat, t.control);
  for (PauliOp cp : {PauliOp::X, PauliOp::Y}) {
    auto obs = conjugate_observables(terms, cp, t, n);
    DenseState st(n);
    for (Eigen::Index i = 0; i < st.amplitudes().size(); ++i)
      st.amplitudes()[i] = {uniform01(rng) - 0.5, uniform01(rng) - 0.5};
    st.amplitudes().normalize();

    for (std::size_t i = 0; i < obs.size(); ++i) {
      PauliString bare(n);
      if (obs[i].term_index >= 0) {
        const PauliString& src = terms[obs[i].term_index].op;
        for (int q = 0; q < n; ++q) bare.set_op(q, src.op(q));
      }
      bare.set_op(t.control, cp);

      // the absorbed preparation is 0-controlled: X-conjugated CX fan-out
      auto apply_anti_prep = [&](DenseState& s) {
        apply_pauli(s, [&] {
          PauliString x(n);
          x.set_op(t.control, PauliOp::X);
          return x;
        }());
        for (int p : t.particles) apply_cx(s, t.control, p);
        apply_pauli(s, [&] {
          PauliString x(n);
          x.set_op(t.control, PauliOp::X);
          return x;
        }());
      };
      DenseState lhs = st;
      apply_anti_prep(lhs);
      apply_pauli(lhs, bare);
      apply_anti_prep(lhs);
      double direct = inner_product(st, lhs).real();

      DenseState rhs = st;
      apply_pauli(rhs, obs[i].measured);
      double via_plan = obs[i].sign * inner_product(st, rhs).real();
      ASSERT_NEAR(direct, via_plan, 1e-12);
    }
  }
}

TEST(MeasurementBases, CountIsTwoKPlusFour) {
  Rng rng = make_rng(53);
  for (int k = 1; k <= 5; ++k) {
    for (int attempt = 0;; ++attempt) {
      ASSERT_LT(attempt, 100);
      auto inst = test::random_instance(rng, 16 + 4 * k, k, 2, 3);
      if (static_cast<int>(inst.target.particles.size()) != k) continue;
      auto bases = measurement_bases(inst.lattice, inst.target);
      EXPECT_EQ(bases.size(), static_cast<std::size_t>(2 * (k + 2)));
      break;
    }
  }
}

TEST(MeasurementPlan, EveryObservableCovered) {
  Rng rng = make_rng(59);
  for (int trial = 0; trial < 10; ++trial) {
    auto inst = test::random_instance(rng, 14, 3);
    // build_measurement_plan throws if an observable has no basis
    MeasurementPlan plan = build_measurement_plan(inst.lattice, inst.target);
    for (const auto& b : plan.bases)
      for (int o : b.covered)
        EXPECT_TRUE(diagonal_in(plan.observables[o].measured, b.setting));
  }
}

TEST(MeasurementPlan, OverlapObservableInMultipleBases) {
  Rng rng = make_rng(61);
  auto inst = test::random_instance(rng, 12, 2);
  MeasurementPlan plan = build_measurement_plan(inst.lattice, inst.target);
  int cover_x = 0, cover_y = 0;
  for (const auto& b : plan.bases)
    for (int o : b.covered) {
      if (o == plan.overlap_obs_x) ++cover_x;
      if (o == plan.overlap_obs_y) ++cover_y;
    }
  EXPECT_GE(cover_x, 2);
  EXPECT_GE(cover_y, 2);
}

TEST(MeasurementPlan, YyTermsCopyFromXxSiblings) {
  Rng rng = make_rng(67);
  auto inst = test::random_instance(rng, 12, 2);
  MeasurementPlan plan = build_measurement_plan(inst.lattice, inst.target);
  int yy = 0;
  for (std::size_t i = 0; i < plan.terms.size(); ++i) {
    bool is_yy = true;
    for (int q : plan.terms[i].op.support())
      if (plan.terms[i].op.op(q) != PauliOp::Y) is_yy = false;
    if (!is_yy) continue;
    ++yy;
    int src = plan.value_copy_from[i];
    ASSERT_GE(src, 0);
    EXPECT_EQ(plan.terms[src].op.support(), plan.terms[i].op.support());
    EXPECT_LT(plan.obs_x_of_term[i], 0);  // never measured directly
  }
  EXPECT_GT(yy, 0);
}
