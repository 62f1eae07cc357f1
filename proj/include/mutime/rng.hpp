#pragma once

#include <cstdint>
#include <random>

namespace mutime {

using Rng = std::mt19937_64;

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Stream seed for (global seed, experiment index, replica index). Streams for
// distinct triples are independent for practical purposes, so replicas can be
// run in any order or in parallel with identical results.
inline std::uint64_t derive_seed(std::uint64_t global, std::uint64_t experiment, std::uint64_t replica) {
  return splitmix64(splitmix64(splitmix64(global) ^ experiment) ^ (replica * 0xd1b54a32d192ed03ULL));
}

inline Rng make_stream(std::uint64_t global, std::uint64_t experiment, std::uint64_t replica) {
  return Rng(derive_seed(global, experiment, replica));
}

// Uniform integer in [lo, hi]. Written out instead of using
// uniform_int_distribution so that streams are identical across standard
// libraries.
inline int uniform_int(Rng& rng, int lo, int hi) {
  const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
  const std::uint64_t limit = Rng::max() - (Rng::max() % span + 1) % span;
  std::uint64_t x;
  do x = rng();
  while (x > limit);
  return lo + static_cast<int>(x % span);
}

// Uniform double in [0, 1).
inline double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

// Number of failures before the first success, P(d) = (1-p)^d p.
inline int geometric(Rng& rng, double p) {
  if (p >= 1.0) return 0;
  int d = 0;
  while (uniform01(rng) >= p) ++d;
  return d;
}

}  // namespace mutime
