#include "kqd/sector_state.hpp"

#include <Eigen/Eigenvalues>
#include <bit>
#include <cmath>

#include "kqd/errors.hpp"
#include "kqd/rng.hpp"

namespace kqd {

namespace {
constexpr double kNormDrift = 1e-8;
using cplx = std::complex<double>;
}  // namespace

SectorState::SectorState(SectorBasisPtr basis) : basis_(std::move(basis)) {
  amp_ = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(basis_->dim()));
}

SectorState SectorState::basis_state(SectorBasisPtr basis, std::uint64_t bits) {
  if (std::popcount(bits) != basis->k())
    throw ValidationError("basis_state: bitstring weight != sector k");
  SectorState s(basis);
  s.amp_[static_cast<Eigen::Index>(basis->rank(bits))] = 1.0;
  return s;
}

void SectorState::check_norm() const {
  double n = amp_.norm();
  if (std::abs(n - 1.0) > kNormDrift)
    throw NumericalError("sector state norm drifted to " + std::to_string(n));
}

void apply_heisenberg_edge(SectorState& state, int i, int j, double angle) {
  const SectorBasis& basis = state.basis();
  if (i == j || i < 0 || j < 0 || i >= basis.n_sites() || j >= basis.n_sites())
    throw ValidationError("apply_heisenberg_edge: bad sites");

  Eigen::VectorXcd& a = state.amplitudes();
  const cplx phase_eq = std::exp(cplx(0, -angle));   // |00>,|11>: ZZ = +1
  const cplx phase_ne = std::exp(cplx(0, angle));    // mixing block prefactor
  const double c = std::cos(2 * angle), s = std::sin(2 * angle);
  const std::uint64_t mi = 1ull << i, mj = 1ull << j;

  const std::uint64_t dim = basis.dim();
  for (std::uint64_t idx = 0; idx < dim; ++idx) {
    std::uint64_t bits = basis.unrank(idx);
    bool bi = bits & mi, bj = bits & mj;
    if (bi == bj) {
      a[static_cast<Eigen::Index>(idx)] *= phase_eq;
    } else if (!bi) {
      // process each {01,10} pair once, from the i=0,j=1 member
      std::uint64_t partner = basis.rank(bits ^ mi ^ mj);
      cplx x = a[static_cast<Eigen::Index>(idx)];
      cplx y = a[static_cast<Eigen::Index>(partner)];
      a[static_cast<Eigen::Index>(idx)] = phase_ne * (c * x - cplx(0, s) * y);
      a[static_cast<Eigen::Index>(partner)] = phase_ne * (c * y - cplx(0, s) * x);
    }
  }
  state.check_norm();
}

std::complex<double> inner_product(const SectorState& a, const SectorState& b) {
  if (!(a.basis() == b.basis()))
    throw ValidationError("inner_product: sector basis mismatch");
  return a.amplitudes().dot(b.amplitudes());  // conjugate-linear in a
}

namespace {
// P|bits> = phase * |bits ^ xmask>
cplx pauli_action_phase(const PauliString& op, std::uint64_t bits) {
  cplx phase = op.phase();
  for (int q : op.support()) {
    bool b = bits & (1ull << q);
    switch (op.op(q)) {
      case PauliOp::X: break;
      case PauliOp::Y: phase *= b ? cplx(0, -1) : cplx(0, 1); break;
      case PauliOp::Z: phase *= b ? -1.0 : 1.0; break;
      case PauliOp::I: break;
    }
  }
  return phase;
}
}  // namespace

double expectation(const SectorState& state, const PauliTerm& term) {
  const SectorBasis& basis = state.basis();
  if (term.op.n_sites() > basis.n_sites())
    throw ValidationError("expectation: observable support out of range");
  std::uint64_t xmask = term.op.x_mask();
  const Eigen::VectorXcd& a = state.amplitudes();
  cplx acc = 0;
  const std::uint64_t dim = basis.dim();
  for (std::uint64_t idx = 0; idx < dim; ++idx) {
    std::uint64_t bits = basis.unrank(idx);
    std::uint64_t flipped = bits ^ xmask;
    if (std::popcount(flipped) != basis.k()) continue;  // leaves the sector
    cplx phase = pauli_action_phase(term.op, bits);
    acc += std::conj(a[static_cast<Eigen::Index>(basis.rank(flipped))]) * phase *
           a[static_cast<Eigen::Index>(idx)];
  }
  return term.coefficient * acc.real();
}

double expectation(const SectorState& state, const std::vector<PauliTerm>& terms) {
  double e = 0;
  for (const auto& t : terms) e += expectation(state, t);
  return e;
}

std::complex<double> vacuum_pauli_overlap(const PauliString& op,
                                          const SectorState& state) {
  const SectorBasis& basis = state.basis();
  std::uint64_t xmask = op.x_mask();
  if (std::popcount(xmask) != basis.k()) return 0.0;
  // P|0^N> = i^{#Y} |xmask| up to the string's own phase
  int ny = 0;
  for (int q : op.support())
    if (op.op(q) == PauliOp::Y) ++ny;
  cplx fwd = op.phase();
  for (int t = 0; t < ny % 4; ++t) fwd *= cplx(0, 1);
  return std::conj(fwd) *
         state.amplitudes()[static_cast<Eigen::Index>(basis.rank(xmask))];
}

double basis_state_expectation(const PauliTerm& term, std::uint64_t bits) {
  if (term.op.x_mask() != 0) return 0.0;
  double v = term.coefficient;
  for (int q : term.op.support())
    if (bits & (1ull << q)) v = -v;
  return v;
}

double basis_state_expectation(const std::vector<PauliTerm>& terms,
                               std::uint64_t bits) {
  double e = 0;
  for (const auto& t : terms) e += basis_state_expectation(t, bits);
  return e;
}

SectorHamiltonian::SectorHamiltonian(const EdgeColoredLattice& lat,
                                     SectorBasisPtr basis)
    : basis_(std::move(basis)) {
  if (lat.n_sites() != basis_->n_sites())
    throw ValidationError("SectorHamiltonian: lattice/basis size mismatch");
  for (int e = 0; e < lat.n_edges(); ++e)
    couplings_.push_back({lat.edge(e).a, lat.edge(e).b, lat.coupling(e)});
}

namespace {
template <typename Vec>
void sector_h_apply(const SectorBasis& basis,
                    const std::vector<SectorHamiltonian::Coupling>& couplings,
                    const Vec& in, Vec& out) {
  out.setZero(in.size());
  const std::uint64_t dim = basis.dim();
  for (std::uint64_t idx = 0; idx < dim; ++idx) {
    std::uint64_t bits = basis.unrank(idx);
    double diag = 0;
    auto v = in[static_cast<Eigen::Index>(idx)];
    for (const auto& c : couplings) {
      bool bi = bits & (1ull << c.i);
      bool bj = bits & (1ull << c.j);
      if (bi == bj) {
        diag += c.strength;
      } else {
        diag -= c.strength;
        std::uint64_t partner = basis.rank(bits ^ (1ull << c.i) ^ (1ull << c.j));
        out[static_cast<Eigen::Index>(partner)] += 2.0 * c.strength * v;
      }
    }
    out[static_cast<Eigen::Index>(idx)] += diag * v;
  }
}
}  // namespace

void SectorHamiltonian::apply(const Eigen::VectorXd& in, Eigen::VectorXd& out) const {
  sector_h_apply(*basis_, couplings_, in, out);
}

void SectorHamiltonian::apply(const Eigen::VectorXcd& in, Eigen::VectorXcd& out) const {
  sector_h_apply(*basis_, couplings_, in, out);
}

SectorState SectorHamiltonian::apply(const SectorState& state) const {
  SectorState out(state.basis_ptr());
  apply(state.amplitudes(), out.amplitudes());
  return out;
}

namespace {
double lanczos_extreme(const SectorHamiltonian& h, std::uint64_t dim,
                       const LanczosOptions& opts) {
  const double flip = opts.largest ? -1.0 : 1.0;
  Eigen::Index n = static_cast<Eigen::Index>(dim);
  Rng rng = make_rng(opts.seed);
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = uniform01(rng) - 0.5;
  v.normalize();

  Eigen::VectorXd v_prev = Eigen::VectorXd::Zero(n), w(n);
  std::vector<double> alpha, beta;
  double best = 0, prev_best = 1e300;
  int m = std::min<std::int64_t>(opts.max_iterations, static_cast<std::int64_t>(dim));
  for (int it = 0; it < m; ++it) {
    h.apply(v, w);
    if (opts.largest) w = -w;
    double a = v.dot(w);
    alpha.push_back(a);
    w -= a * v;
    if (!beta.empty()) w -= beta.back() * v_prev;
    double b = w.norm();

    // smallest Ritz value of the current tridiagonal
    Eigen::Index t = static_cast<Eigen::Index>(alpha.size());
    Eigen::MatrixXd tri = Eigen::MatrixXd::Zero(t, t);
    for (Eigen::Index i = 0; i < t; ++i) {
      tri(i, i) = alpha[i];
      if (i + 1 < t) tri(i, i + 1) = tri(i + 1, i) = beta[i];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(tri, Eigen::EigenvaluesOnly);
    best = es.eigenvalues()(0);
    if (std::abs(best - prev_best) < opts.tolerance * (1.0 + std::abs(best)) && it > 8)
      break;
    prev_best = best;

    if (b < 1e-14) break;  // invariant subspace hit
    beta.push_back(b);
    v_prev = v;
    v = w / b;
  }
  return flip * best;
}
}  // namespace

double sector_extreme_eigenvalue(const EdgeColoredLattice& lat, int k,
                                 const LanczosOptions& opts) {
  auto basis = make_sector_basis(lat.n_sites(), k);
  if (basis->dim() == 1) {
    std::uint64_t bits = basis->unrank(0);
    return basis_state_expectation(hamiltonian_terms(lat), bits);
  }
  SectorHamiltonian h(lat, basis);
  return lanczos_extreme(h, basis->dim(), opts);
}

double sector_ground_energy(const EdgeColoredLattice& lat, int k,
                            std::uint64_t max_dim_budget) {
  auto dim = binomial(lat.n_sites(), k);
  if (dim == 0) throw ValidationError("sector_ground_energy: k out of range");
  if (dim > max_dim_budget)
    throw NumericalError("sector_ground_energy: sector dimension " +
                         std::to_string(dim) + " over budget");
  return sector_extreme_eigenvalue(lat, k, {});
}

double hamiltonian_norm(const EdgeColoredLattice& lat,
                        std::uint64_t max_dim_budget) {
  const int n = lat.n_sites();
  double norm = 0;
  // spin-flip symmetry pairs sectors k and n-k
  for (int k = 0; k <= n / 2; ++k) {
    if (binomial(n, k) > max_dim_budget)
      throw NumericalError("hamiltonian_norm: sector dimension over budget");
    LanczosOptions lo;
    double lo_val = sector_extreme_eigenvalue(lat, k, lo);
    lo.largest = true;
    double hi_val = sector_extreme_eigenvalue(lat, k, lo);
    norm = std::max({norm, std::abs(lo_val), std::abs(hi_val)});
  }
  return norm;
}

}  // namespace kqd
