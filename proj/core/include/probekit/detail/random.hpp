#pragma once

// Small deterministic RNG helpers.  The standard distributions are allowed
// to differ between standard-library implementations, so sampling that must
// reproduce bit-for-bit across toolchains is done by hand here.

#include <cstdint>
#include <random>

namespace probekit::detail {

// SplitMix64 finalizer, used to spread seeds across independent substreams.
inline constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

// Derives the seed of substream `stream` from a master seed.
inline constexpr std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t stream) noexcept {
  return mix64(seed ^ mix64(stream));
}

// Unbiased draw from [0, bound) via rejection sampling.
inline std::size_t uniform_index(std::mt19937_64& rng, std::size_t bound) {
  const std::uint64_t b = bound;
  const std::uint64_t limit = std::uint64_t(-1) - std::uint64_t(-1) % b;
  std::uint64_t r = rng();
  while (r >= limit) r = rng();
  return static_cast<std::size_t>(r % b);
}

// Uniform double in [0, 1) with 53 bits of precision.
inline double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace probekit::detail
