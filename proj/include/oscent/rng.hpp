#pragma once

// Counter-based random numbers: every draw is a pure function of
// (seed, realization, counter), so parallel sampling is order independent.

#include <cstdint>

namespace oscent::rng {

/// SplitMix64 finalizer (Steele, Lea, Flood 2014).
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t key(std::uint64_t seed, std::uint64_t realization, std::uint64_t counter) {
  std::uint64_t h = mix64(seed);
  h = mix64(h ^ mix64(realization + 0x632be59bd9b4e019ULL));
  h = mix64(h ^ mix64(counter + 0x8cb92ba72f3d8dd7ULL));
  return h;
}

/// Uniform double in [0, 1) with 53 random bits.
constexpr double uniform01(std::uint64_t seed, std::uint64_t realization, std::uint64_t counter) {
  return static_cast<double>(key(seed, realization, counter) >> 11) * 0x1.0p-53;
}

}  // namespace oscent::rng
