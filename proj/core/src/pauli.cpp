#include "kqd/pauli.hpp"

#include <stdexcept>

#include "kqd/errors.hpp"

namespace kqd {

char pauli_char(PauliOp p) {
  switch (p) {
    case PauliOp::I: return 'I';
    case PauliOp::X: return 'X';
    case PauliOp::Y: return 'Y';
    case PauliOp::Z: return 'Z';
  }
  return '?';
}

PauliOp pauli_from_char(char c) {
  switch (c) {
    case 'I': return PauliOp::I;
    case 'X': return PauliOp::X;
    case 'Y': return PauliOp::Y;
    case 'Z': return PauliOp::Z;
    default: throw ValidationError(std::string("invalid Pauli letter: ") + c);
  }
}

PauliString PauliString::from_label(const std::string& label) {
  PauliString p(static_cast<int>(label.size()));
  for (std::size_t i = 0; i < label.size(); ++i)
    p.ops_[i] = pauli_from_char(label[i]);
  return p;
}

int PauliString::weight() const {
  int w = 0;
  for (PauliOp p : ops_)
    if (p != PauliOp::I) ++w;
  return w;
}

std::vector<int> PauliString::support() const {
  std::vector<int> s;
  for (int i = 0; i < n_sites(); ++i)
    if (ops_[i] != PauliOp::I) s.push_back(i);
  return s;
}

bool PauliString::is_identity() const { return weight() == 0; }

double PauliString::sign() const {
  if (phase_pow_ == 0) return 1.0;
  if (phase_pow_ == 2) return -1.0;
  throw NumericalError("PauliString::sign on non-Hermitian phase");
}

std::complex<double> PauliString::phase() const {
  static const std::complex<double> table[4] = {
      {1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  return table[phase_pow_];
}

bool PauliString::commutes_with(const PauliString& other) const {
  int anti = 0;
  int n = std::min(n_sites(), other.n_sites());
  for (int i = 0; i < n; ++i) {
    PauliOp a = ops_[i], b = other.ops_[i];
    if (a != PauliOp::I && b != PauliOp::I && a != b) ++anti;
  }
  return (anti % 2) == 0;
}

namespace {
// product of single-site letters: a*b = i^pow * letter
struct LetterProd {
  PauliOp letter;
  int pow;
};

LetterProd letter_mul(PauliOp a, PauliOp b) {
  if (a == PauliOp::I) return {b, 0};
  if (b == PauliOp::I) return {a, 0};
  if (a == b) return {PauliOp::I, 0};
  // XY = iZ, YZ = iX, ZX = iY; reversed order picks up -i
  auto cyc = [](PauliOp u, PauliOp v) {
    return (u == PauliOp::X && v == PauliOp::Y) ||
           (u == PauliOp::Y && v == PauliOp::Z) ||
           (u == PauliOp::Z && v == PauliOp::X);
  };
  PauliOp c;
  if ((a == PauliOp::X && b == PauliOp::Y) || (a == PauliOp::Y && b == PauliOp::X))
    c = PauliOp::Z;
  else if ((a == PauliOp::Y && b == PauliOp::Z) || (a == PauliOp::Z && b == PauliOp::Y))
    c = PauliOp::X;
  else
    c = PauliOp::Y;
  return {c, cyc(a, b) ? 1 : 3};
}

inline bool x_bit(PauliOp p) { return p == PauliOp::X || p == PauliOp::Y; }
inline bool z_bit(PauliOp p) { return p == PauliOp::Z || p == PauliOp::Y; }

inline PauliOp from_bits(bool x, bool z) {
  if (x && z) return PauliOp::Y;
  if (x) return PauliOp::X;
  if (z) return PauliOp::Z;
  return PauliOp::I;
}
}  // namespace

PauliString& PauliString::operator*=(const PauliString& rhs) {
  if (rhs.n_sites() != n_sites())
    throw ValidationError("PauliString product: size mismatch");
  int pow = phase_pow_ + rhs.phase_pow_;
  for (int i = 0; i < n_sites(); ++i) {
    LetterProd lp = letter_mul(ops_[i], rhs.ops_[i]);
    ops_[i] = lp.letter;
    pow += lp.pow;
  }
  phase_pow_ = pow % 4;
  return *this;
}

void PauliString::conjugate_cx(int control, int target) {
  bool xc = x_bit(ops_[control]), zc = z_bit(ops_[control]);
  bool xt = x_bit(ops_[target]), zt = z_bit(ops_[target]);
  // tableau update: X_c -> X_c X_t, Z_t -> Z_c Z_t, with the standard sign rule
  if (xc && zt && (xt == zc)) phase_pow_ = (phase_pow_ + 2) % 4;
  bool nxt = xt ^ xc;
  bool nzc = zc ^ zt;
  ops_[control] = from_bits(xc, nzc);
  ops_[target] = from_bits(nxt, zt);
}

void PauliString::conjugate_x(int site) {
  if (ops_[site] == PauliOp::Y || ops_[site] == PauliOp::Z)
    phase_pow_ = (phase_pow_ + 2) % 4;
}

void PauliString::conjugate_anticx(int control, int target) {
  conjugate_x(control);
  conjugate_cx(control, target);
  conjugate_x(control);
}

std::uint64_t PauliString::x_mask() const {
  std::uint64_t m = 0;
  int n = std::min(n_sites(), 64);
  for (int i = 0; i < n; ++i)
    if (x_bit(ops_[i])) m |= (1ull << i);
  return m;
}

std::uint64_t PauliString::z_mask() const {
  std::uint64_t m = 0;
  int n = std::min(n_sites(), 64);
  for (int i = 0; i < n; ++i)
    if (z_bit(ops_[i])) m |= (1ull << i);
  return m;
}

std::string PauliString::label() const {
  std::string s;
  s.reserve(ops_.size());
  for (PauliOp p : ops_) s.push_back(pauli_char(p));
  return s;
}

}  // namespace kqd
