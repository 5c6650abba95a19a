#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "logdos/ids.hpp"

namespace logdos {

// The engine only relies on the raw mt19937_64 stream (which the standard
// pins down exactly); the distributions below are spelled out so results
// do not depend on the standard library's distribution implementations.
using Rng = std::mt19937_64;

/// splitmix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ULL;
  x ^= x >> 27;
  x *= 0x94d049bb133111ebULL;
  x ^= x >> 31;
  return x;
}

/// Independent stream for (seed, purpose, index).
inline Rng derive_rng(std::uint64_t seed, std::uint64_t purpose, std::uint64_t index = 0) {
  std::uint64_t s = mix64(seed + 0x9e3779b97f4a7c15ULL);
  s = mix64(s ^ (purpose * 0xd1b54a32d192ed03ULL));
  s = mix64(s ^ (index + 0x632be59bd9b4e019ULL));
  return Rng{s};
}

/// Uniform integer in [0, bound). bound must be > 0.
inline std::uint64_t uniform_below(Rng& rng, std::uint64_t bound) {
  const std::uint64_t limit = bound * (UINT64_MAX / bound);
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % bound;
}

/// Uniform double in [0, 1).
inline double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Exponential variate with the given rate (> 0).
inline double exponential(Rng& rng, double rate) {
  return -std::log1p(-uniform01(rng)) / rate;
}

inline Digest random_digest(Rng& rng) {
  const std::uint64_t hi = rng();
  const std::uint64_t lo = rng();
  return Digest{hi, lo};
}

}  // namespace logdos
