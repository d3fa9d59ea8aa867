#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "kqd/lattice.hpp"
#include "kqd/pauli.hpp"
#include "kqd/rng.hpp"

namespace kqd {

// Sparse generator set {(P_k, lambda_k)} attached to one two-qubit gate
// layer; the channel is the product of exp-generator factors.
struct PauliLindbladModel {
  std::string layer_id;  // usually the color letter
  std::vector<std::pair<PauliString, double>> generators;

  void validate(int n_sites, std::size_t max_generators = 4096) const;
};

// Draw the Pauli to insert before one execution of the layer. Each generator
// fires independently with probability (1 - exp(-2 gain lambda)) / 2.
PauliString sample_error(const PauliLindbladModel& model, double gain, Rng& rng);

// prod over anticommuting generators of exp(-2 gain lambda).
double pauli_fidelity(const PauliLindbladModel& model, const PauliString& pauli,
                      double gain = 1.0);

// Uniform rate on every weight-1 and weight-2 Pauli supported on the edges of
// one color class.
PauliLindbladModel uniform_edge_model(const EdgeColoredLattice& lat,
                                      EdgeColor color, double rate);

// --- desk-scale channel machinery (n <= 2 qubits) ---

// Pauli transfer matrix T_ab = tr[P_a Lambda(P_b)] / 2^n from Kraus operators.
Eigen::MatrixXd ptm_from_kraus(const std::vector<Eigen::MatrixXcd>& kraus,
                               int n_qubits);

// Brute-force average (1/4^n) sum_P PTM(P) T PTM(P); output is the PTM of the
// Pauli-twirled channel.
Eigen::MatrixXd twirl_channel(const Eigen::MatrixXd& ptm);

// All 4^n Pauli strings on n qubits in PTM index order (I,X,Y,Z per site,
// site 0 fastest).
std::vector<PauliString> ptm_pauli_basis(int n_qubits);

std::vector<Eigen::MatrixXcd> depolarizing_kraus(double p, int n_qubits);
std::vector<Eigen::MatrixXcd> amplitude_damping_kraus(double gamma);
// Haar-ish random CPTP channel via a random isometry.
std::vector<Eigen::MatrixXcd> random_channel_kraus(int n_qubits, Rng& rng,
                                                   int n_kraus = 0);

}  // namespace kqd
