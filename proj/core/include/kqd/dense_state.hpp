#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <vector>

#include "kqd/pauli.hpp"
#include "kqd/rng.hpp"
#include "kqd/sector_state.hpp"

namespace kqd {

// Full 2^n state vector, used as the oracle backend and for noisy
// trajectories where Pauli errors leave the particle-number sector.
class DenseState {
public:
  static constexpr int kDefaultCap = 16;

  explicit DenseState(int n_qubits, int cap = kDefaultCap);
  static DenseState vacuum(int n_qubits, int cap = kDefaultCap);
  static DenseState basis_state(int n_qubits, std::uint64_t bits,
                                int cap = kDefaultCap);

  int n_qubits() const { return n_; }
  Eigen::VectorXcd& amplitudes() { return amp_; }
  const Eigen::VectorXcd& amplitudes() const { return amp_; }

  void check_norm() const;

private:
  int n_;
  Eigen::VectorXcd amp_;
};

void apply_hadamard(DenseState& state, int q);
void apply_sdg(DenseState& state, int q);
// Rotate qubit q so that measuring Z afterwards samples `basis`.
void rotate_to_basis(DenseState& state, int q, PauliOp basis);
void apply_cx(DenseState& state, int control, int target);
void apply_heisenberg_edge(DenseState& state, int i, int j, double angle);
void apply_pauli(DenseState& state, const PauliString& op);

std::complex<double> inner_product(const DenseState& a, const DenseState& b);
double expectation(const DenseState& state, const PauliTerm& term);
double expectation(const DenseState& state, const std::vector<PauliTerm>& terms);

// n_shots computational-basis samples.
std::vector<std::uint64_t> sample_bits(const DenseState& state, Rng& rng,
                                       int n_shots);

Eigen::MatrixXcd dense_hamiltonian(const std::vector<PauliTerm>& terms,
                                   int n_qubits);
// exp(-i H t) for Hermitian H via eigendecomposition.
Eigen::MatrixXcd exact_unitary(const Eigen::MatrixXcd& h, double t);

// Embedding between sector and full space (for cross-checks).
DenseState embed_sector(const SectorState& s, int cap = DenseState::kDefaultCap);
SectorState project_to_sector(const DenseState& d, int k);

}  // namespace kqd
