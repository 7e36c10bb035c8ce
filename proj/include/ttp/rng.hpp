#pragma once

#include <cmath>
#include <cstdint>
#include <random>

// Random helpers with fixed algorithms so that seeded runs reproduce the same
// streams regardless of the standard library's distribution implementations.

namespace ttp {

using Rng = std::mt19937_64;

// splitmix64 step, used to derive independent child seeds from (seed, stream).
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Unbiased integer in [0, n) by rejection.
inline std::uint64_t uniform_below(Rng& rng, std::uint64_t n) {
  if (n <= 1) return 0;
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % n;
}

inline std::size_t uniform_index(Rng& rng, std::size_t n) {
  return static_cast<std::size_t>(uniform_below(rng, static_cast<std::uint64_t>(n)));
}

// Uniform double in [0, 1) with 53 random bits.
inline double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform_real(Rng& rng, double lo, double hi) { return lo + (hi - lo) * uniform01(rng); }

// Standard normal via Box-Muller (cosine branch only).
inline double standard_normal(Rng& rng) {
  double u1;
  do {
    u1 = uniform01(rng);
  } while (u1 <= 0.0);
  const double u2 = uniform01(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
}

inline double lognormal(Rng& rng, double mu, double sigma) {
  return std::exp(mu + sigma * standard_normal(rng));
}

// Poisson count; splits large rates so the Knuth product never underflows.
inline std::uint64_t poisson(Rng& rng, double lambda) {
  std::uint64_t total = 0;
  while (lambda > 30.0) {
    double chunk = lambda / 2.0;
    total += poisson(rng, chunk);
    lambda -= chunk;
  }
  if (lambda <= 0.0) return total;
  const double limit = std::exp(-lambda);
  double prod = 1.0;
  std::uint64_t k = 0;
  do {
    ++k;
    prod *= uniform01(rng);
  } while (prod > limit);
  return total + k - 1;
}

}  // namespace ttp
