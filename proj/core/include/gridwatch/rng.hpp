#pragma once

#include <cstdint>
#include <random>

namespace gridwatch {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Independent stream for work unit `unit` under a run-level seed. Units
// (trees, trials, stations) each own one, so scheduling order never changes
// results.
inline std::mt19937_64 stream_for(std::uint64_t seed, std::uint64_t unit) {
  return std::mt19937_64(splitmix64(splitmix64(seed) ^ splitmix64(unit + 0x51ed270b27a1f3c5ULL)));
}

}  // namespace gridwatch
