// Deterministic per-trial random streams derived from a master seed.
#pragma once

#include <cstdint>
#include <random>

namespace mpt {

inline uint64_t splitmix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Stream key from (master seed, component tags); order-sensitive.
inline uint64_t derive_seed(uint64_t master, uint64_t a, uint64_t b = 0,
                            uint64_t c = 0) {
  uint64_t s = splitmix64(master ^ 0x5851f42d4c957f2dULL);
  s = splitmix64(s ^ a);
  s = splitmix64(s ^ b);
  s = splitmix64(s ^ c);
  return s;
}

using Rng = std::mt19937_64;

inline Rng make_rng(uint64_t master, uint64_t a, uint64_t b = 0,
                    uint64_t c = 0) {
  return Rng(derive_seed(master, a, b, c));
}

}  // namespace mpt
