#pragma once

#include <cstdint>
#include <random>

namespace rii {

// Seeded RNG streams. Every stochastic routine takes (seed, stream, substream)
// and derives an independent mt19937_64 from them via splitmix64 mixing, so
// parallel trials are reproducible regardless of scheduling.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::mt19937_64 make_rng(std::uint64_t seed, std::uint64_t stream = 0,
                                std::uint64_t substream = 0) {
  std::uint64_t s = splitmix64(seed);
  s = splitmix64(s ^ splitmix64(stream));
  s = splitmix64(s ^ splitmix64(substream));
  return std::mt19937_64(s);
}

}  // namespace rii
