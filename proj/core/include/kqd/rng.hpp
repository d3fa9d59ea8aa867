#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace kqd {

using Rng = std::mt19937_64;

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

// Child stream seed for task (master, path...). Streams depend only on the
// path, never on scheduling order, so parallel runs stay reproducible.
inline std::uint64_t derive_seed(std::uint64_t master,
                                 std::initializer_list<std::uint64_t> path) {
  std::uint64_t s = splitmix64(master);
  for (std::uint64_t p : path) s = splitmix64(s ^ (p + 0x9e3779b97f4a7c15ull));
  return s;
}

inline Rng make_rng(std::uint64_t master,
                    std::initializer_list<std::uint64_t> path = {}) {
  return Rng(derive_seed(master, path));
}

// Uniform in [0,1) from the top 53 bits; avoids distribution objects whose
// sequences are implementation defined.
inline double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline std::uint64_t uniform_index(Rng& rng, std::uint64_t n) {
  // modulo bias is irrelevant at the sample counts used here
  return rng() % n;
}

inline std::int64_t binomial_draw(Rng& rng, std::int64_t n, double p) {
  std::int64_t c = 0;
  for (std::int64_t i = 0; i < n; ++i)
    if (uniform01(rng) < p) ++c;
  return c;
}

inline double gaussian(Rng& rng) {
  // Box-Muller; two uniforms per call keeps the stream layout simple.
  double u1 = uniform01(rng);
  double u2 = uniform01(rng);
  if (u1 < 1e-300) u1 = 1e-300;
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586477 * u2);
}

}  // namespace kqd
