#pragma once

#include <cstdint>
#include <random>

namespace emstab::harness {

/// SplitMix64 finalizer; decorrelates per-sample seeds derived from (seed, index).
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

using Rng = std::mt19937_64;

inline Rng sample_rng(std::uint64_t seed, std::uint64_t index) { return Rng(splitmix64(splitmix64(seed) ^ index)); }

/// Uniform on (0, 1].
inline double uniform_open_closed(Rng& rng) { return 1.0 - std::uniform_real_distribution<double>(0.0, 1.0)(rng); }

inline double gaussian(Rng& rng) { return std::normal_distribution<double>(0.0, 1.0)(rng); }

}  // namespace emstab::harness
