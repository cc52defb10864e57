#pragma once

#include <cmath>
#include <cstdint>
#include <random>

// Seed mixing and distribution helpers. std::mt19937_64 output is pinned by
// the standard, but the std distributions are not; drawing through these
// helpers keeps trajectories and golden files reproducible across platforms.

namespace hvaclab {

// splitmix64 finalizer.
inline std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
  std::uint64_t z = a + 0x9e3779b97f4a7c15ULL * (b + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Uniform on [0, 1).
inline double uniform_double(std::mt19937_64& g) {
  return static_cast<double>(g() >> 11) * 0x1.0p-53;
}

inline double uniform_range(std::mt19937_64& g, double lo, double hi) {
  return lo + (hi - lo) * uniform_double(g);
}

// Uniform index in [0, n); n > 0.
inline std::size_t uniform_index(std::mt19937_64& g, std::size_t n) {
  return static_cast<std::size_t>(uniform_double(g) * static_cast<double>(n)) % n;
}

// Box-Muller, no pair caching so engine state maps 1:1 to draws.
inline double normal(std::mt19937_64& g, double mean = 0.0, double stddev = 1.0) {
  const double u1 = static_cast<double>((g() >> 11) + 1) * 0x1.0p-53;  // (0, 1]
  const double u2 = uniform_double(g);
  const double r = std::sqrt(-2.0 * std::log(u1));
  return mean + stddev * r * std::cos(2.0 * 3.14159265358979323846 * u2);
}

}  // namespace hvaclab
