#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "kqd/lattice.hpp"
#include "kqd/pauli.hpp"
#include "kqd/sector_basis.hpp"

namespace kqd {

// State vector restricted to one Hamming-weight sector. Value semantics; the
// basis object is shared and immutable. Unitary updates must keep the norm
// within 1e-8 of 1 or the operation throws (drift means a gate bug, never
// something to renormalize away).
class SectorState {
public:
  explicit SectorState(SectorBasisPtr basis);
  static SectorState basis_state(SectorBasisPtr basis, std::uint64_t bits);

  const SectorBasis& basis() const { return *basis_; }
  const SectorBasisPtr& basis_ptr() const { return basis_; }
  Eigen::VectorXcd& amplitudes() { return amp_; }
  const Eigen::VectorXcd& amplitudes() const { return amp_; }

  void check_norm() const;

private:
  SectorBasisPtr basis_;
  Eigen::VectorXcd amp_;
};

// exp(-i angle (XX+YY+ZZ)) on edge (i,j), block-restricted to the sector.
void apply_heisenberg_edge(SectorState& state, int i, int j, double angle);

std::complex<double> inner_product(const SectorState& a, const SectorState& b);

// <state|P|state>; identically 0 for observables that leave the sector.
double expectation(const SectorState& state, const PauliTerm& term);
double expectation(const SectorState& state, const std::vector<PauliTerm>& terms);

// (P|0...0>)^dagger |state>: the reduced matrix element behind the ancilla
// interference readout. Zero unless the X-support of P has weight k.
std::complex<double> vacuum_pauli_overlap(const PauliString& op,
                                          const SectorState& state);

// <b|P|b> for a computational basis state; nonzero only for pure-Z support.
double basis_state_expectation(const PauliTerm& term, std::uint64_t bits);
double basis_state_expectation(const std::vector<PauliTerm>& terms,
                               std::uint64_t bits);

// Heisenberg Hamiltonian applied within a sector, matrix-free. Real symmetric
// in this basis.
class SectorHamiltonian {
public:
  struct Coupling {
    int i, j;
    double strength;
  };

  SectorHamiltonian(const EdgeColoredLattice& lat, SectorBasisPtr basis);

  const SectorBasis& basis() const { return *basis_; }

  void apply(const Eigen::VectorXd& in, Eigen::VectorXd& out) const;
  void apply(const Eigen::VectorXcd& in, Eigen::VectorXcd& out) const;
  SectorState apply(const SectorState& state) const;  // unnormalized result

private:
  std::vector<Coupling> couplings_;
  SectorBasisPtr basis_;
};

struct LanczosOptions {
  int max_iterations = 400;
  double tolerance = 1e-10;
  std::uint64_t seed = 7;
  bool largest = false;  // extreme of +H instead of -H
};

// Extreme eigenvalue of H in the k-sector via plain Lanczos (no
// reorthogonalization; adequate for spectrum edges).
double sector_extreme_eigenvalue(const EdgeColoredLattice& lat, int k,
                                 const LanczosOptions& opts = {});

double sector_ground_energy(const EdgeColoredLattice& lat, int k,
                            std::uint64_t max_dim_budget = (1ull << 24));

// Spectral norm max_k max(|lambda_min|, lambda_max) over all sectors.
double hamiltonian_norm(const EdgeColoredLattice& lat,
                        std::uint64_t max_dim_budget = (1ull << 24));

}  // namespace kqd
