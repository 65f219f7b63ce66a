#pragma once

// Seeded, reproducible random probability vectors. mt19937_64 output is
// fixed by the standard and the uniform mapping below is hand-rolled, so
// identical seeds give identical samples on every platform.

#include <cstdint>
#include <random>
#include <vector>

#include "addercap/poisson_binomial.hpp"

namespace addercap {

using Rng = std::mt19937_64;

inline Rng seeded_rng(std::uint64_t seed) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
  return Rng(seq);
}

/// Independent stream for one trial of a seeded batch.
inline Rng trial_rng(std::uint64_t seed, std::uint64_t trial) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(trial), static_cast<std::uint32_t>(trial >> 32)};
  return Rng(seq);
}

/// Uniform on [0, 1) from the top 53 bits of one engine draw.
inline double uniform_unit(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform_in(Rng& rng, double lo, double hi) {
  return lo + (hi - lo) * uniform_unit(rng);
}

/// Random interior probability vector, coordinates uniform on [lo, hi].
inline ProbVector sample_interior(std::size_t n, Rng& rng, double lo = 0.01, double hi = 0.99) {
  std::vector<double> p(n);
  for (double& pi : p) pi = uniform_in(rng, lo, hi);
  return ProbVector(std::move(p));
}

}  // namespace addercap
