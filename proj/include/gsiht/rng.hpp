#pragma once

#include <cstdint>
#include <random>

namespace gsiht {

using Rng = std::mt19937_64;

// splitmix64 step; used to spread seed material before feeding mt19937_64.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Deterministic per-(trial, purpose) stream seeds so trial order and thread
// count cannot change any result.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a,
                                 std::uint64_t b = 0) {
  std::uint64_t s = master;
  std::uint64_t z = splitmix64(s);
  s ^= z + 0x632be59bd9b4e019ULL * (a + 1);
  z = splitmix64(s);
  s ^= z + 0x9e3779b97f4a7c15ULL * (b + 1);
  return splitmix64(s);
}

inline Rng make_rng(std::uint64_t seed) { return Rng(seed); }

}  // namespace gsiht
