#include "kqd/sector_basis.hpp"

#include <array>
#include <bit>

#include "kqd/errors.hpp"

namespace kqd {

namespace {
constexpr int kMaxN = 64;

const std::array<std::array<std::uint64_t, kMaxN + 1>, kMaxN + 1>& binom_table() {
  static const auto table = [] {
    std::array<std::array<std::uint64_t, kMaxN + 1>, kMaxN + 1> t{};
    for (int n = 0; n <= kMaxN; ++n) {
      t[n][0] = 1;
      for (int k = 1; k <= n; ++k)
        t[n][k] = t[n - 1][k - 1] + (k <= n - 1 ? t[n - 1][k] : 0);
    }
    return t;
  }();
  return table;
}
}  // namespace

std::uint64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  if (n > kMaxN) throw ValidationError("binomial: n > 64 unsupported");
  return binom_table()[n][k];
}

SectorBasis::SectorBasis(int n_sites, int k) : n_sites_(n_sites), k_(k) {
  if (n_sites < 1 || n_sites > kMaxN)
    throw ValidationError("SectorBasis: n_sites must be in [1,64]");
  if (k < 0 || k > n_sites)
    throw ValidationError("SectorBasis: k must be in [0,n_sites]");
  dim_ = binomial(n_sites, k);
}

std::uint64_t SectorBasis::rank(std::uint64_t bits) const {
  std::uint64_t r = 0;
  int i = 0;
  while (bits) {
    int p = std::countr_zero(bits);
    bits &= bits - 1;
    r += binomial(p, ++i);
  }
  return r;
}

std::uint64_t SectorBasis::unrank(std::uint64_t index) const {
  std::uint64_t bits = 0;
  std::uint64_t rem = index;
  for (int i = k_; i >= 1; --i) {
    // largest p with C(p, i) <= rem
    int p = i - 1;
    while (p + 1 < n_sites_ && binomial(p + 1, i) <= rem) ++p;
    bits |= (1ull << p);
    rem -= binomial(p, i);
  }
  return bits;
}

SectorBasisPtr make_sector_basis(int n_sites, int k) {
  return std::make_shared<const SectorBasis>(n_sites, k);
}

}  // namespace kqd
