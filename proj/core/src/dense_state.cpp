#include "kqd/dense_state.hpp"

#include <Eigen/Eigenvalues>
#include <bit>
#include <cmath>

#include "kqd/errors.hpp"

namespace kqd {

namespace {
using cplx = std::complex<double>;
constexpr double kNormDrift = 1e-8;
}  // namespace

DenseState::DenseState(int n_qubits, int cap) : n_(n_qubits) {
  if (n_qubits < 1) throw ValidationError("DenseState: n_qubits must be >= 1");
  if (n_qubits > cap)
    throw ValidationError("DenseState: n_qubits " + std::to_string(n_qubits) +
                          " exceeds cap " + std::to_string(cap));
  amp_ = Eigen::VectorXcd::Zero(1ll << n_);
}

DenseState DenseState::vacuum(int n_qubits, int cap) {
  return basis_state(n_qubits, 0, cap);
}

DenseState DenseState::basis_state(int n_qubits, std::uint64_t bits, int cap) {
  DenseState s(n_qubits, cap);
  s.amp_[static_cast<Eigen::Index>(bits)] = 1.0;
  return s;
}

void DenseState::check_norm() const {
  double n = amp_.norm();
  if (std::abs(n - 1.0) > kNormDrift)
    throw NumericalError("dense state norm drifted to " + std::to_string(n));
}

namespace {
template <typename F>
void for_qubit_pairs(int n, int q, F&& f) {
  const std::uint64_t mask = 1ull << q;
  const std::uint64_t dim = 1ull << n;
  for (std::uint64_t i = 0; i < dim; ++i)
    if (!(i & mask)) f(i, i | mask);
}
}  // namespace

void apply_hadamard(DenseState& state, int q) {
  auto& a = state.amplitudes();
  const double r = 1.0 / std::sqrt(2.0);
  for_qubit_pairs(state.n_qubits(), q, [&](std::uint64_t i0, std::uint64_t i1) {
    cplx x = a[static_cast<Eigen::Index>(i0)], y = a[static_cast<Eigen::Index>(i1)];
    a[static_cast<Eigen::Index>(i0)] = r * (x + y);
    a[static_cast<Eigen::Index>(i1)] = r * (x - y);
  });
}

void apply_sdg(DenseState& state, int q) {
  auto& a = state.amplitudes();
  for_qubit_pairs(state.n_qubits(), q, [&](std::uint64_t, std::uint64_t i1) {
    a[static_cast<Eigen::Index>(i1)] *= cplx(0, -1);
  });
}

void rotate_to_basis(DenseState& state, int q, PauliOp basis) {
  switch (basis) {
    case PauliOp::Z:
    case PauliOp::I:
      return;
    case PauliOp::X:
      apply_hadamard(state, q);
      return;
    case PauliOp::Y:
      apply_sdg(state, q);
      apply_hadamard(state, q);
      return;
  }
}

void apply_cx(DenseState& state, int control, int target) {
  auto& a = state.amplitudes();
  const std::uint64_t cm = 1ull << control, tm = 1ull << target;
  const std::uint64_t dim = 1ull << state.n_qubits();
  for (std::uint64_t i = 0; i < dim; ++i)
    if ((i & cm) && !(i & tm))
      std::swap(a[static_cast<Eigen::Index>(i)],
                a[static_cast<Eigen::Index>(i | tm)]);
}

void apply_heisenberg_edge(DenseState& state, int i, int j, double angle) {
  if (i == j) throw ValidationError("apply_heisenberg_edge: i == j");
  auto& a = state.amplitudes();
  const cplx phase_eq = std::exp(cplx(0, -angle));
  const cplx phase_ne = std::exp(cplx(0, angle));
  const double c = std::cos(2 * angle), s = std::sin(2 * angle);
  const std::uint64_t mi = 1ull << i, mj = 1ull << j;
  const std::uint64_t dim = 1ull << state.n_qubits();
  for (std::uint64_t b = 0; b < dim; ++b) {
    bool bi = b & mi, bj = b & mj;
    if (bi == bj) {
      a[static_cast<Eigen::Index>(b)] *= phase_eq;
    } else if (!bi) {
      std::uint64_t p = b ^ mi ^ mj;
      cplx x = a[static_cast<Eigen::Index>(b)], y = a[static_cast<Eigen::Index>(p)];
      a[static_cast<Eigen::Index>(b)] = phase_ne * (c * x - cplx(0, s) * y);
      a[static_cast<Eigen::Index>(p)] = phase_ne * (c * y - cplx(0, s) * x);
    }
  }
}

void apply_pauli(DenseState& state, const PauliString& op) {
  if (op.n_sites() > state.n_qubits())
    throw ValidationError("apply_pauli: operator support out of range");
  auto& a = state.amplitudes();
  const std::uint64_t xmask = op.x_mask();
  const std::uint64_t dim = 1ull << state.n_qubits();
  Eigen::VectorXcd out(a.size());
  for (std::uint64_t b = 0; b < dim; ++b) {
    cplx phase = op.phase();
    for (int q : op.support()) {
      bool bit = b & (1ull << q);
      switch (op.op(q)) {
        case PauliOp::X: break;
        case PauliOp::Y: phase *= bit ? cplx(0, -1) : cplx(0, 1); break;
        case PauliOp::Z: phase *= bit ? -1.0 : 1.0; break;
        case PauliOp::I: break;
      }
    }
    out[static_cast<Eigen::Index>(b ^ xmask)] = phase * a[static_cast<Eigen::Index>(b)];
  }
  a = std::move(out);
}

std::complex<double> inner_product(const DenseState& a, const DenseState& b) {
  if (a.n_qubits() != b.n_qubits())
    throw ValidationError("inner_product: size mismatch");
  return a.amplitudes().dot(b.amplitudes());
}

double expectation(const DenseState& state, const PauliTerm& term) {
  DenseState tmp = state;
  apply_pauli(tmp, term.op);
  return term.coefficient * inner_product(state, tmp).real();
}

double expectation(const DenseState& state, const std::vector<PauliTerm>& terms) {
  double e = 0;
  for (const auto& t : terms) e += expectation(state, t);
  return e;
}

std::vector<std::uint64_t> sample_bits(const DenseState& state, Rng& rng,
                                       int n_shots) {
  const auto& a = state.amplitudes();
  std::vector<double> cdf(a.size());
  double acc = 0;
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    acc += std::norm(a[i]);
    cdf[i] = acc;
  }
  std::vector<std::uint64_t> out(n_shots);
  for (int s = 0; s < n_shots; ++s) {
    double u = uniform01(rng) * acc;
    auto it = std::lower_bound(cdf.begin(), cdf.end(), u);
    out[s] = static_cast<std::uint64_t>(it - cdf.begin());
  }
  return out;
}

Eigen::MatrixXcd dense_hamiltonian(const std::vector<PauliTerm>& terms,
                                   int n_qubits) {
  const std::uint64_t dim = 1ull << n_qubits;
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(dim, dim);
  for (const auto& t : terms) {
    const std::uint64_t xmask = t.op.x_mask();
    for (std::uint64_t b = 0; b < dim; ++b) {
      cplx phase = t.op.phase();
      for (int q : t.op.support()) {
        bool bit = b & (1ull << q);
        switch (t.op.op(q)) {
          case PauliOp::X: break;
          case PauliOp::Y: phase *= bit ? cplx(0, -1) : cplx(0, 1); break;
          case PauliOp::Z: phase *= bit ? -1.0 : 1.0; break;
          case PauliOp::I: break;
        }
      }
      h(static_cast<Eigen::Index>(b ^ xmask), static_cast<Eigen::Index>(b)) +=
          t.coefficient * phase;
    }
  }
  return h;
}

Eigen::MatrixXcd exact_unitary(const Eigen::MatrixXcd& h, double t) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
  Eigen::VectorXcd ph(es.eigenvalues().size());
  for (Eigen::Index i = 0; i < ph.size(); ++i)
    ph[i] = std::exp(cplx(0, -t * es.eigenvalues()[i]));
  return es.eigenvectors() * ph.asDiagonal() * es.eigenvectors().adjoint();
}

DenseState embed_sector(const SectorState& s, int cap) {
  DenseState d(s.basis().n_sites(), cap);
  for (std::uint64_t i = 0; i < s.basis().dim(); ++i)
    d.amplitudes()[static_cast<Eigen::Index>(s.basis().unrank(i))] =
        s.amplitudes()[static_cast<Eigen::Index>(i)];
  return d;
}

SectorState project_to_sector(const DenseState& d, int k) {
  auto basis = make_sector_basis(d.n_qubits(), k);
  SectorState s(basis);
  for (std::uint64_t i = 0; i < basis->dim(); ++i)
    s.amplitudes()[static_cast<Eigen::Index>(i)] =
        d.amplitudes()[static_cast<Eigen::Index>(basis->unrank(i))];
  return s;
}

}  // namespace kqd
