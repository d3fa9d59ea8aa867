#include "kqd/krylov.hpp"

#include <algorithm>
#include <cmath>

#include "kqd/errors.hpp"

namespace kqd {

namespace {
using cplx = std::complex<double>;
}

ExperimentLayout ExperimentLayout::make(EdgeColoredLattice full_in,
                                        PreparationTarget t) {
  validate_target(full_in, t);
  ExperimentLayout lay;
  lay.full = std::move(full_in);
  lay.target = std::move(t);

  std::vector<int> system_sites;
  for (int s = 0; s < lay.full.n_sites(); ++s)
    if (s != lay.target.control) system_sites.push_back(s);
  lay.system = induced_sublattice(lay.full, system_sites);

  for (int p : lay.target.particles) {
    int q = lay.system.old_to_new[p];
    lay.particles_sys.push_back(q);
    lay.psi0_bits |= 1ull << q;
  }
  lay.evolution = drop_edges_at(lay.full, lay.target.control);
  return lay;
}

std::string to_string(PairStructure s) {
  return s == PairStructure::Toeplitz ? "toeplitz" : "hermitian";
}

std::string to_string(Provenance::Mode m) {
  switch (m) {
    case Provenance::Mode::Exact: return "exact";
    case Provenance::Mode::Shots: return "shots";
    case Provenance::Mode::Noisy: return "noisy";
  }
  return "?";
}

KrylovPair KrylovPair::leading(int d_prime) const {
  KrylovPair out = *this;
  out.D = d_prime;
  out.H = H.topLeftCorner(d_prime, d_prime).eval();
  out.S = S.topLeftCorner(d_prime, d_prime).eval();
  return out;
}

namespace {

void check_budget(const ExperimentLayout& layout, std::uint64_t budget) {
  if (binomial(layout.n_system(), layout.k()) > budget)
    throw NumericalError("krylov: sector dimension over budget");
}

KrylovPair toeplitz_fill(const std::vector<cplx>& m, const std::vector<cplx>& s,
                         int D, double dt) {
  KrylovPair pair;
  pair.D = D;
  pair.dt = dt;
  pair.structure = PairStructure::Toeplitz;
  pair.H.resize(D, D);
  pair.S.resize(D, D);
  for (int j = 0; j < D; ++j)
    for (int k = 0; k < D; ++k) {
      cplx hv = k >= j ? m[k - j] : std::conj(m[j - k]);
      cplx sv = k >= j ? s[k - j] : std::conj(s[j - k]);
      pair.H(j, k) = hv;
      pair.S(j, k) = sv;
    }
  return pair;
}

}  // namespace

KrylovPair exact_elements(const ExperimentLayout& layout, double dt, int steps,
                          int D, int order, std::uint64_t budget) {
  if (D < 1) throw ValidationError("exact_elements: D must be >= 1");
  check_budget(layout, budget);

  auto basis = make_sector_basis(layout.n_system(), layout.k());
  SectorState psi0 = SectorState::basis_state(basis, layout.psi0_bits);
  SectorHamiltonian h(layout.system.lattice, basis);
  SectorState h_psi0 = h.apply(psi0);
  auto terms = hamiltonian_terms(layout.system.lattice);
  LayeredCircuit trotter = build_trotter(layout.system.lattice, dt, steps, order);

  std::vector<cplx> m(D), s(D);
  SectorState psi = psi0;
  for (int d = 0; d < D; ++d) {
    if (d == 0) {
      s[0] = 1.0;  // diagonals are classical
      m[0] = basis_state_expectation(terms, layout.psi0_bits);
    } else {
      apply_circuit(psi, trotter);
      s[d] = inner_product(psi0, psi);
      m[d] = inner_product(h_psi0, psi);
    }
  }
  KrylovPair pair = toeplitz_fill(m, s, D, dt);
  pair.provenance.mode = Provenance::Mode::Exact;
  pair.provenance.n_system = layout.n_system();
  return pair;
}

KrylovPair exact_elements_hermitian(const ExperimentLayout& layout, double dt,
                                    int steps, int D, int order,
                                    std::uint64_t budget) {
  if (D < 1) throw ValidationError("exact_elements_hermitian: D must be >= 1");
  check_budget(layout, budget);

  auto basis = make_sector_basis(layout.n_system(), layout.k());
  SectorHamiltonian h(layout.system.lattice, basis);
  LayeredCircuit trotter = build_trotter(layout.system.lattice, dt, steps, order);

  std::vector<SectorState> psi;
  psi.reserve(D);
  psi.push_back(SectorState::basis_state(basis, layout.psi0_bits));
  for (int d = 1; d < D; ++d) {
    SectorState next = psi.back();
    apply_circuit(next, trotter);
    psi.push_back(std::move(next));
  }

  KrylovPair pair;
  pair.D = D;
  pair.dt = dt;
  pair.structure = PairStructure::Hermitian;
  pair.H.resize(D, D);
  pair.S.resize(D, D);
  for (int k = 0; k < D; ++k) {
    SectorState h_psik = h.apply(psi[k]);
    for (int j = 0; j < D; ++j) {
      pair.H(j, k) = inner_product(psi[j], h_psik);
      pair.S(j, k) = j == k ? cplx(1.0) : inner_product(psi[j], psi[k]);
    }
  }
  pair.H = ((pair.H + pair.H.adjoint()) / 2.0).eval();
  pair.S = ((pair.S + pair.S.adjoint()) / 2.0).eval();
  pair.provenance.mode = Provenance::Mode::Exact;
  pair.provenance.n_system = layout.n_system();
  return pair;
}

namespace {
// System part of a full-register observable, renumbered into sector indexing.
PauliString system_part(const PauliString& full, const ExperimentLayout& layout) {
  PauliString sys(layout.n_system());
  for (int q = 0; q < full.n_sites(); ++q) {
    if (q == layout.target.control) continue;
    if (full.op(q) != PauliOp::I)
      sys.set_op(layout.system.old_to_new[q], full.op(q));
  }
  return sys;
}
}  // namespace

HadamardExpectations hadamard_test_expectations(
    const ExperimentLayout& layout, const MeasurementPlan& plan, double dt,
    int steps, int D, int order, std::uint64_t budget) {
  check_budget(layout, budget);

  auto basis = make_sector_basis(layout.n_system(), layout.k());
  LayeredCircuit trotter = build_trotter(layout.system.lattice, dt, steps, order);
  const double phi1 = trotter.vacuum_phase;

  struct SplitObs {
    PauliOp control;
    PauliString sys;
  };
  std::vector<SplitObs> split;
  split.reserve(plan.observables.size());
  for (const auto& o : plan.observables) {
    PauliOp cp = o.measured.op(layout.target.control);
    if (cp != PauliOp::X && cp != PauliOp::Y)
      throw NumericalError("hadamard test: ancilla letter must stay X or Y");
    split.push_back({cp, system_part(o.measured, layout)});
  }

  HadamardExpectations out;
  out.D = D;
  out.dt = dt;
  out.phase.resize(D);
  out.values.assign(D, std::vector<double>(plan.observables.size(), 0.0));

  SectorState chi = SectorState::basis_state(basis, layout.psi0_bits);
  for (int d = 0; d < D; ++d) {
    if (d > 0) apply_circuit(chi, trotter);
    const double phi = d * phi1;
    out.phase[d] = phi;
    const cplx corr = std::exp(cplx(0, -phi));
    for (std::size_t o = 0; o < split.size(); ++o) {
      cplx z = corr * vacuum_pauli_overlap(split[o].sys, chi);
      out.values[d][o] = split[o].control == PauliOp::X ? z.real() : z.imag();
    }
  }
  return out;
}

KrylovPair pair_from_observable_values(
    const ExperimentLayout& layout, const MeasurementPlan& plan,
    const std::vector<std::vector<double>>& values,
    const std::vector<double>& phase, double dt, Provenance provenance) {
  const int D = static_cast<int>(values.size());
  if (D < 1) throw ValidationError("pair reconstruction: no distances");

  auto terms_sys = hamiltonian_terms(layout.system.lattice);
  std::vector<cplx> m(D), s(D);
  m[0] = basis_state_expectation(terms_sys, layout.psi0_bits);
  s[0] = 1.0;

  for (int d = 1; d < D; ++d) {
    const cplx corr = std::exp(cplx(0, phase[d]));
    std::vector<cplx> z(plan.terms.size(), 0.0);
    for (std::size_t i = 0; i < plan.terms.size(); ++i) {
      if (plan.value_copy_from[i] >= 0) continue;
      const auto& ox = plan.observables[plan.obs_x_of_term[i]];
      const auto& oy = plan.observables[plan.obs_y_of_term[i]];
      double re = ox.sign * values[d][plan.obs_x_of_term[i]];
      double im = oy.sign * values[d][plan.obs_y_of_term[i]];
      z[i] = corr * cplx(re, im);
    }
    for (std::size_t i = 0; i < plan.terms.size(); ++i)
      if (plan.value_copy_from[i] >= 0) z[i] = z[plan.value_copy_from[i]];

    cplx md = 0;
    for (std::size_t i = 0; i < plan.terms.size(); ++i)
      md += plan.terms[i].coefficient * z[i];
    m[d] = md;

    const auto& sx = plan.observables[plan.overlap_obs_x];
    const auto& sy = plan.observables[plan.overlap_obs_y];
    s[d] = corr * cplx(sx.sign * values[d][plan.overlap_obs_x],
                       sy.sign * values[d][plan.overlap_obs_y]);
  }

  KrylovPair pair = toeplitz_fill(m, s, D, dt);
  pair.provenance = std::move(provenance);
  pair.provenance.n_system = layout.n_system();
  return pair;
}

ShotData sample_shots(const HadamardExpectations& exact,
                      const MeasurementPlan& plan, int n_shots,
                      std::uint64_t seed) {
  if (n_shots < 1) throw ValidationError("sample_shots: n_shots must be >= 1");
  ShotData data;
  data.n_shots = n_shots;
  data.seed = seed;
  data.counts.assign(exact.D, {});
  for (int d = 0; d < exact.D; ++d) {
    data.counts[d].assign(plan.bases.size(), {});
    for (std::size_t b = 0; b < plan.bases.size(); ++b) {
      const auto& covered = plan.bases[b].covered;
      auto& slot = data.counts[d][b];
      slot.assign(covered.size(), 0);
      for (std::size_t i = 0; i < covered.size(); ++i) {
        double v = exact.values[d][covered[i]];
        if (v > 1.0 + 1e-9 || v < -1.0 - 1e-9)
          throw ValidationError("sample_shots: |expectation| > 1");
        double p = std::clamp((1.0 + v) / 2.0, 0.0, 1.0);
        Rng rng = make_rng(seed, {static_cast<std::uint64_t>(d), b, i});
        slot[i] = binomial_draw(rng, n_shots, p);
      }
    }
  }
  return data;
}

std::vector<std::vector<double>> estimates_from_shots(const MeasurementPlan& plan,
                                                      const ShotData& data) {
  const int D = static_cast<int>(data.counts.size());
  std::vector<std::vector<double>> est(
      D, std::vector<double>(plan.observables.size(), 0.0));
  for (int d = 0; d < D; ++d) {
    std::vector<int> n_cover(plan.observables.size(), 0);
    for (std::size_t b = 0; b < plan.bases.size(); ++b) {
      const auto& covered = plan.bases[b].covered;
      for (std::size_t i = 0; i < covered.size(); ++i) {
        double mean = 2.0 * static_cast<double>(data.counts[d][b][i]) /
                          static_cast<double>(data.n_shots) -
                      1.0;
        est[d][covered[i]] += mean;
        ++n_cover[covered[i]];
      }
    }
    for (std::size_t o = 0; o < est[d].size(); ++o)
      if (n_cover[o] > 0) est[d][o] /= n_cover[o];
  }
  return est;
}

ShotData resample_shots(const ShotData& data, Rng& rng) {
  ShotData out = data;
  for (auto& per_d : out.counts)
    for (auto& per_b : per_d)
      for (auto& c : per_b) {
        double p = static_cast<double>(c) / data.n_shots;
        c = binomial_draw(rng, data.n_shots, p);
      }
  return out;
}

}  // namespace kqd
