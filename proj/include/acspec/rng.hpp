#pragma once

#include <cstdint>
#include <random>

namespace acspec {

// SplitMix64 mixing step.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Derives an independent stream seed from a master seed and up to two stream
// indices (replicate, row block, ...). Counter-based, so parallel and serial
// runs draw identical streams.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b = 0) {
  std::uint64_t h = splitmix64(base ^ 0x1905a6c3d8f7b2e1ULL);
  h = splitmix64(h ^ splitmix64(a));
  h = splitmix64(h ^ splitmix64(b ^ 0x71c9b72fe3d4a581ULL));
  return h;
}

inline std::mt19937_64 make_engine(std::uint64_t base, std::uint64_t a, std::uint64_t b = 0) {
  return std::mt19937_64(derive_seed(base, a, b));
}

}  // namespace acspec
