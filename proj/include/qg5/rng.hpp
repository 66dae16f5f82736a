#pragma once

#include <cstdint>

namespace qg5 {

// Counter-based pseudo-random stream: the value at (seed, index, slot) is a
// pure function of its arguments, so batch scans give identical samples
// regardless of thread count or evaluation order.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t mix3(std::uint64_t seed, std::uint64_t index, std::uint64_t slot) {
  return splitmix64(splitmix64(splitmix64(seed) ^ index) ^ (0xa0761d6478bd642fULL * (slot + 1)));
}

// Uniform in [0, 1).
inline double uniform01(std::uint64_t seed, std::uint64_t index, std::uint64_t slot) {
  return static_cast<double>(mix3(seed, index, slot) >> 11) * 0x1.0p-53;
}

// Uniform in [lo, hi).
inline double uniform(std::uint64_t seed, std::uint64_t index, std::uint64_t slot,
                      double lo, double hi) {
  return lo + (hi - lo) * uniform01(seed, index, slot);
}

}  // namespace qg5
