#pragma once

// Seedable randomness with a fully specified bit stream. The std::
// distributions are implementation-defined, so variates are derived here
// directly from the engine output.

#include <concepts>
#include <cstdint>
#include <limits>
#include <random>

namespace permlim {

using Rng = std::mt19937_64;

inline constexpr std::uint64_t kDefaultSeed = 42;

template <class G>
concept Rng64 = std::uniform_random_bit_generator<G> && G::min() == 0 &&
                G::max() == std::numeric_limits<std::uint64_t>::max();

inline constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

// Seed for trial `index` of a batch run under `master`:
// splitmix64(master ^ splitmix64(index)). Stable across releases.
inline constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  return splitmix64(master ^ splitmix64(index));
}

// Uniform on [0,1) with 53-bit resolution; one engine call.
template <Rng64 G>
double uniform01(G& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Uniform on {0,...,bound-1} by rejection; bound > 0.
template <Rng64 G>
std::uint64_t uniform_below(G& rng, std::uint64_t bound) {
  const std::uint64_t threshold = (0 - bound) % bound;
  for (;;) {
    const std::uint64_t r = rng();
    if (r >= threshold) return r % bound;
  }
}

}  // namespace permlim
