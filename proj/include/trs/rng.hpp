#pragma once

// Seeded randomness. The generator is std::mt19937_64 and every helper below
// consumes its raw 64-bit output directly (no std distributions), so a given
// seed produces the same keys and reports with any standard library.

#include <cstdint>
#include <random>

namespace trs {

using u128 = unsigned __int128;
using Rng = std::mt19937_64;

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Seed of trial `index` under a master seed.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  return splitmix64(master + index);
}

/// Uniform integer with `bits` random low bits (bits <= 128).
inline u128 random_bits(Rng& rng, unsigned bits) {
  if (bits == 0) return 0;
  u128 v = rng();
  if (bits > 64) v |= static_cast<u128>(rng()) << 64;
  if (bits < 128) v &= (static_cast<u128>(1) << bits) - 1;
  return v;
}

/// Uniform integer in [0, bound) by masked rejection.
inline std::uint64_t uniform_below(Rng& rng, std::uint64_t bound) {
  if (bound <= 1) return 0;
  unsigned bits = 64 - static_cast<unsigned>(__builtin_clzll(bound - 1));
  for (;;) {
    std::uint64_t v = rng();
    if (bits < 64) v &= (std::uint64_t{1} << bits) - 1;
    if (v < bound) return v;
  }
}

}  // namespace trs
