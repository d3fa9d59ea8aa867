#pragma once

#include <cstdint>
#include <vector>

#include "kqd/rng.hpp"

namespace kqd {

// Independent per-qubit assignment errors.
struct ReadoutModel {
  std::vector<double> p01;  // P(read 1 | prepared 0)
  std::vector<double> p10;  // P(read 0 | prepared 1)

  static ReadoutModel perfect(int n_qubits);
  static ReadoutModel uniform(int n_qubits, double p01, double p10);
  void validate(int n_qubits) const;
  bool is_perfect() const;
};

// One measured shot with X-type readout twirling: the mask flips qubits
// physically before readout and is undone classically afterwards.
std::uint64_t readout_shot(const ReadoutModel& model, int n_qubits,
                           std::uint64_t true_bits, std::uint64_t twirl_mask,
                           Rng& rng);

// Multiplicative readout attenuation of a Z-product observable under
// twirling: prod over the support of (1 - p01 - p10).
double trex_lambda_exact(const ReadoutModel& model,
                         const std::vector<int>& support);

// Calibration estimate from `shots` twirled vacuum preparations.
double trex_lambda_calibrated(const ReadoutModel& model, int n_qubits,
                              const std::vector<int>& support, int shots,
                              Rng& rng);

// raw / lambda; throws NumericalError below the signal floor.
double trex_mitigate(double raw_estimate, double lambda,
                     double lambda_floor = 0.05);

}  // namespace kqd
