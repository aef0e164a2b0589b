#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace gcrid {

// mt19937_64 is fully specified by the standard, so seeded streams are
// byte-identical across platforms. All randomized operations in the library
// go through these helpers; std::uniform_int_distribution and std::shuffle
// are implementation-defined and must not be used.
using Rng = std::mt19937_64;

inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
  // splitmix64 finalizer over seed^salt
  std::uint64_t z = seed ^ (salt + 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Uniform value in [0, n) via 128-bit multiply-shift (Lemire).
inline std::uint64_t bounded(Rng& rng, std::uint64_t n) {
  return static_cast<std::uint64_t>(
      (static_cast<unsigned __int128>(rng()) * n) >> 64);
}

template <typename T>
void deterministic_shuffle(std::vector<T>& v, Rng& rng) {
  for (std::size_t i = v.size(); i > 1; --i) {
    std::size_t j = static_cast<std::size_t>(bounded(rng, i));
    std::swap(v[i - 1], v[j]);
  }
}

}  // namespace gcrid
