#pragma once

#include <cstdlib>
#include <random>
#include <string>

// Shared helpers for the test binaries. Randomized property draws use a
// fixed seed unless ERMAKOV_LAB_SEED is set, so runs are reproducible.
namespace testsupport {

inline std::uint64_t seed_from_env() {
  if (const char* s = std::getenv("ERMAKOV_LAB_SEED")) {
    try {
      return std::stoull(s);
    } catch (...) {
    }
  }
  return 0x9e3779b97f4a7c15ull;
}

inline std::mt19937_64 make_rng() { return std::mt19937_64(seed_from_env()); }

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

}  // namespace testsupport
