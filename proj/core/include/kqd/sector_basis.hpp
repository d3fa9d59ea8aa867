#pragma once

#include <cstdint>
#include <memory>

namespace kqd {

std::uint64_t binomial(int n, int k);

// Basis of the fixed-Hamming-weight-k subspace of n qubits, indexed by the
// colexicographic combinadic ranking. rank/unrank are O(k) with no tables
// beyond the shared binomial coefficients.
class SectorBasis {
public:
  SectorBasis(int n_sites, int k);

  int n_sites() const { return n_sites_; }
  int k() const { return k_; }
  std::uint64_t dim() const { return dim_; }

  std::uint64_t rank(std::uint64_t bits) const;
  std::uint64_t unrank(std::uint64_t index) const;

  bool operator==(const SectorBasis& o) const {
    return n_sites_ == o.n_sites_ && k_ == o.k_;
  }

private:
  int n_sites_;
  int k_;
  std::uint64_t dim_;
};

using SectorBasisPtr = std::shared_ptr<const SectorBasis>;

SectorBasisPtr make_sector_basis(int n_sites, int k);

}  // namespace kqd
