#pragma once

#include <cstdint>
#include <random>

namespace qtomo {

// SplitMix64 finalizer; decorrelates nearby seeds.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Counter-based child seed: independent of evaluation order, so parallel
// batches reproduce the sequential ones run by run.
inline std::uint64_t child_seed(std::uint64_t master, std::uint64_t index) {
  return splitmix64(splitmix64(master) ^ (index * 0x9E3779B97F4A7C15ULL + 0x243F6A8885A308D3ULL));
}

inline std::mt19937_64 make_engine(std::uint64_t seed) {
  return std::mt19937_64(splitmix64(seed));
}

// Poisson draw: sequential-search inversion below mean 30, transformed
// rejection with squeeze above.
std::int64_t poisson_sample(double mean, std::mt19937_64& gen);

}  // namespace qtomo
