#pragma once

#include <cstdint>

namespace acpl {

// SplitMix64. Self-contained so streams are identical across platforms and
// standard libraries (std::uniform_real_distribution is not portable).
struct Rng {
  uint64_t state;

  explicit Rng(uint64_t seed) : state(seed) {}

  uint64_t next() {
    uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }
  // uniform in [0, 1)
  double uniform() { return double(next() >> 11) * 0x1.0p-53; }
  // uniform in [lo, hi)
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  // uniform integer in [0, m)
  int64_t below(int64_t m) { return int64_t(next() % uint64_t(m)); }
};

}  // namespace acpl
