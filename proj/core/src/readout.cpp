#include "kqd/readout.hpp"

#include "kqd/errors.hpp"

namespace kqd {

ReadoutModel ReadoutModel::perfect(int n_qubits) {
  return uniform(n_qubits, 0.0, 0.0);
}

ReadoutModel ReadoutModel::uniform(int n_qubits, double p01, double p10) {
  ReadoutModel m;
  m.p01.assign(n_qubits, p01);
  m.p10.assign(n_qubits, p10);
  m.validate(n_qubits);
  return m;
}

void ReadoutModel::validate(int n_qubits) const {
  if (static_cast<int>(p01.size()) != n_qubits ||
      static_cast<int>(p10.size()) != n_qubits)
    throw ValidationError("readout model: size mismatch");
  for (double p : p01)
    if (p < 0 || p >= 0.5) throw ValidationError("readout model: p01 in [0,1/2)");
  for (double p : p10)
    if (p < 0 || p >= 0.5) throw ValidationError("readout model: p10 in [0,1/2)");
}

bool ReadoutModel::is_perfect() const {
  for (double p : p01)
    if (p != 0) return false;
  for (double p : p10)
    if (p != 0) return false;
  return true;
}

std::uint64_t readout_shot(const ReadoutModel& model, int n_qubits,
                           std::uint64_t true_bits, std::uint64_t twirl_mask,
                           Rng& rng) {
  std::uint64_t physical = true_bits ^ twirl_mask;
  std::uint64_t recorded = 0;
  for (int q = 0; q < n_qubits; ++q) {
    bool bit = (physical >> q) & 1;
    double flip = bit ? model.p10[q] : model.p01[q];
    if (flip > 0 && uniform01(rng) < flip) bit = !bit;
    if (bit) recorded |= 1ull << q;
  }
  return recorded ^ twirl_mask;
}

double trex_lambda_exact(const ReadoutModel& model,
                         const std::vector<int>& support) {
  double lambda = 1.0;
  for (int q : support) lambda *= 1.0 - model.p01[q] - model.p10[q];
  return lambda;
}

double trex_lambda_calibrated(const ReadoutModel& model, int n_qubits,
                              const std::vector<int>& support, int shots,
                              Rng& rng) {
  if (shots < 1) throw ValidationError("trex calibration: shots must be >= 1");
  double acc = 0;
  for (int s = 0; s < shots; ++s) {
    std::uint64_t mask = rng() & ((n_qubits == 64) ? ~0ull : ((1ull << n_qubits) - 1));
    std::uint64_t bits = readout_shot(model, n_qubits, 0, mask, rng);
    int parity = 0;
    for (int q : support) parity ^= (bits >> q) & 1;
    acc += parity ? -1.0 : 1.0;
  }
  return acc / shots;
}

double trex_mitigate(double raw_estimate, double lambda, double lambda_floor) {
  if (std::abs(lambda) < lambda_floor)
    throw NumericalError("trex_mitigate: readout signal lost");
  return raw_estimate / lambda;
}

}  // namespace kqd
