#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

namespace kqd {

enum class PauliOp : std::uint8_t { I = 0, X = 1, Y = 2, Z = 3 };

char pauli_char(PauliOp p);
PauliOp pauli_from_char(char c);

// Tensor product of single-site Paulis with an overall phase i^phase_pow.
// Site 0 is the first character of the label.
class PauliString {
public:
  PauliString() = default;
  explicit PauliString(int n_sites) : ops_(n_sites, PauliOp::I) {}
  static PauliString from_label(const std::string& label);

  int n_sites() const { return static_cast<int>(ops_.size()); }
  PauliOp op(int site) const { return ops_[site]; }
  void set_op(int site, PauliOp p) { ops_[site] = p; }
  int phase_pow() const { return phase_pow_; }
  void set_phase_pow(int p) { phase_pow_ = ((p % 4) + 4) % 4; }

  int weight() const;
  std::vector<int> support() const;
  bool is_identity() const;

  // +1 or -1; only valid for Hermitian strings (phase_pow 0 or 2).
  double sign() const;
  std::complex<double> phase() const;

  bool commutes_with(const PauliString& other) const;

  // this <- this * rhs, tracking the i^k phase of the product.
  PauliString& operator*=(const PauliString& rhs);

  // this <- CX(control,target) * this * CX(control,target)
  void conjugate_cx(int control, int target);
  // this <- X_site * this * X_site
  void conjugate_x(int site);
  // conjugation by the 0-controlled X (fires when `control` is |0>); same
  // letters as conjugate_cx, signs can differ
  void conjugate_anticx(int control, int target);

  // masks over the first 64 sites
  std::uint64_t x_mask() const;
  std::uint64_t z_mask() const;

  std::string label() const;  // letters only, site 0 first
  bool operator==(const PauliString& o) const {
    return ops_ == o.ops_ && phase_pow_ == o.phase_pow_;
  }

private:
  std::vector<PauliOp> ops_;
  int phase_pow_ = 0;
};

// One Hermitian term coeff * P of a Hamiltonian; P carries no phase.
struct PauliTerm {
  double coefficient = 0.0;
  PauliString op;
};

}  // namespace kqd
