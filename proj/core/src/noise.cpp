#include "kqd/noise.hpp"

#include <cmath>

#include "kqd/errors.hpp"

namespace kqd {

namespace {
using cplx = std::complex<double>;

Eigen::Matrix2cd pauli_matrix(PauliOp p) {
  Eigen::Matrix2cd m;
  switch (p) {
    case PauliOp::I: m << 1, 0, 0, 1; break;
    case PauliOp::X: m << 0, 1, 1, 0; break;
    case PauliOp::Y: m << 0, cplx(0, -1), cplx(0, 1), 0; break;
    case PauliOp::Z: m << 1, 0, 0, -1; break;
  }
  return m;
}

// site 0 is the least significant bit of the row/column index
Eigen::MatrixXcd pauli_dense(const PauliString& p) {
  const int n = p.n_sites();
  const Eigen::Index dim = 1ll << n;
  Eigen::MatrixXcd m(dim, dim);
  for (Eigen::Index r = 0; r < dim; ++r)
    for (Eigen::Index c = 0; c < dim; ++c) {
      cplx v = p.phase();
      for (int q = 0; q < n && v != cplx(0); ++q)
        v *= pauli_matrix(p.op(q))((r >> q) & 1, (c >> q) & 1);
      m(r, c) = v;
    }
  return m;
}
}  // namespace

void PauliLindbladModel::validate(int n_sites, std::size_t max_generators) const {
  if (generators.size() > max_generators)
    throw ValidationError("noise model: generator count exceeds sparsity cap");
  for (const auto& [p, rate] : generators) {
    if (rate < 0) throw ValidationError("noise model: negative rate");
    if (p.n_sites() > n_sites || p.is_identity())
      throw ValidationError("noise model: bad generator support");
  }
}

PauliString sample_error(const PauliLindbladModel& model, double gain, Rng& rng) {
  if (gain < 1.0)
    throw ValidationError("sample_error: gain must be >= 1 (amplification only)");
  if (model.generators.empty()) return PauliString(0);
  PauliString out(model.generators.front().first.n_sites());
  for (const auto& [p, rate] : model.generators) {
    double w = (1.0 - std::exp(-2.0 * gain * rate)) / 2.0;
    if (uniform01(rng) < w) out *= p;
  }
  out.set_phase_pow(0);  // global phase is irrelevant for error insertion
  return out;
}

double pauli_fidelity(const PauliLindbladModel& model, const PauliString& pauli,
                      double gain) {
  double f = 1.0;
  for (const auto& [p, rate] : model.generators)
    if (!p.commutes_with(pauli)) f *= std::exp(-2.0 * gain * rate);
  return f;
}

PauliLindbladModel uniform_edge_model(const EdgeColoredLattice& lat,
                                      EdgeColor color, double rate) {
  PauliLindbladModel model;
  model.layer_id = std::string(1, color_char(color));
  const PauliOp letters[3] = {PauliOp::X, PauliOp::Y, PauliOp::Z};
  for (int e : lat.edges_of_color(color)) {
    int a = lat.edge(e).a, b = lat.edge(e).b;
    for (PauliOp pa : letters) {
      PauliString s(lat.n_sites());
      s.set_op(a, pa);
      model.generators.emplace_back(s, rate);
    }
    for (PauliOp pb : letters) {
      PauliString s(lat.n_sites());
      s.set_op(b, pb);
      model.generators.emplace_back(s, rate);
    }
    for (PauliOp pa : letters)
      for (PauliOp pb : letters) {
        PauliString s(lat.n_sites());
        s.set_op(a, pa);
        s.set_op(b, pb);
        model.generators.emplace_back(s, rate);
      }
  }
  return model;
}

std::vector<PauliString> ptm_pauli_basis(int n_qubits) {
  const int count = 1 << (2 * n_qubits);
  std::vector<PauliString> basis;
  basis.reserve(count);
  for (int idx = 0; idx < count; ++idx) {
    PauliString p(n_qubits);
    int rem = idx;
    for (int q = 0; q < n_qubits; ++q) {
      p.set_op(q, static_cast<PauliOp>(rem % 4));
      rem /= 4;
    }
    basis.push_back(std::move(p));
  }
  return basis;
}

Eigen::MatrixXd ptm_from_kraus(const std::vector<Eigen::MatrixXcd>& kraus,
                               int n_qubits) {
  if (n_qubits < 1 || n_qubits > 2)
    throw ValidationError("ptm_from_kraus: brute force handles 1 or 2 qubits");
  auto basis = ptm_pauli_basis(n_qubits);
  const double dim = static_cast<double>(1 << n_qubits);
  const int m = static_cast<int>(basis.size());

  std::vector<Eigen::MatrixXcd> dense;
  dense.reserve(m);
  for (const auto& p : basis) dense.push_back(pauli_dense(p));

  Eigen::MatrixXd ptm(m, m);
  for (int b = 0; b < m; ++b) {
    Eigen::MatrixXcd mapped = Eigen::MatrixXcd::Zero(dense[b].rows(), dense[b].cols());
    for (const auto& k : kraus) mapped += k * dense[b] * k.adjoint();
    for (int a = 0; a < m; ++a)
      ptm(a, b) = ((dense[a] * mapped).trace() / dim).real();
  }
  return ptm;
}

Eigen::MatrixXd twirl_channel(const Eigen::MatrixXd& ptm) {
  const int m = static_cast<int>(ptm.rows());
  int n_qubits = 0;
  while ((1 << (2 * n_qubits)) < m) ++n_qubits;
  if ((1 << (2 * n_qubits)) != m || n_qubits < 1 || n_qubits > 2)
    throw ValidationError("twirl_channel: PTM must be 4x4 or 16x16");

  auto basis = ptm_pauli_basis(n_qubits);
  Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(m, m);
  Eigen::VectorXd sign(m);
  for (const auto& p : basis) {
    for (int a = 0; a < m; ++a)
      sign[a] = p.commutes_with(basis[a]) ? 1.0 : -1.0;
    acc += sign.asDiagonal() * ptm * sign.asDiagonal();
  }
  return acc / static_cast<double>(m);
}

std::vector<Eigen::MatrixXcd> depolarizing_kraus(double p, int n_qubits) {
  if (p < 0 || p > 1) throw ValidationError("depolarizing_kraus: p in [0,1]");
  auto basis = ptm_pauli_basis(n_qubits);
  std::vector<Eigen::MatrixXcd> kraus;
  kraus.push_back(std::sqrt(1.0 - p) *
                  Eigen::MatrixXcd::Identity(1 << n_qubits, 1 << n_qubits));
  const double q = p / static_cast<double>(basis.size() - 1);
  for (std::size_t i = 1; i < basis.size(); ++i)
    kraus.push_back(std::sqrt(q) * pauli_dense(basis[i]));
  return kraus;
}

std::vector<Eigen::MatrixXcd> amplitude_damping_kraus(double gamma) {
  if (gamma < 0 || gamma > 1)
    throw ValidationError("amplitude_damping_kraus: gamma in [0,1]");
  Eigen::Matrix2cd k0, k1;
  k0 << 1, 0, 0, std::sqrt(1.0 - gamma);
  k1 << 0, std::sqrt(gamma), 0, 0;
  return {k0, k1};
}

std::vector<Eigen::MatrixXcd> random_channel_kraus(int n_qubits, Rng& rng,
                                                   int n_kraus) {
  const int d = 1 << n_qubits;
  if (n_kraus <= 0) n_kraus = d * d;
  // random isometry from a QR factorization of a Gaussian block matrix
  Eigen::MatrixXcd g(d * n_kraus, d);
  for (Eigen::Index r = 0; r < g.rows(); ++r)
    for (Eigen::Index c = 0; c < g.cols(); ++c)
      g(r, c) = cplx(gaussian(rng), gaussian(rng));
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
  Eigen::MatrixXcd q = qr.householderQ() * Eigen::MatrixXcd::Identity(d * n_kraus, d);
  std::vector<Eigen::MatrixXcd> kraus;
  for (int k = 0; k < n_kraus; ++k)
    kraus.push_back(q.block(k * d, 0, d, d));
  return kraus;
}

}  // namespace kqd
