#pragma once

#include <cstdint>

namespace spinlab {

// Counter-based generator: every draw is a pure function of (seed, stream,
// counter), so Monte-Carlo runs are bit-reproducible and streams may be
// consumed in any order or in parallel.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0)
      : base_(mix(mix(seed + 0x9e3779b97f4a7c15ull) ^ mix(stream + 0xbf58476d1ce4e5b9ull))) {}

  std::uint64_t next_u64() { return mix(base_ + 0x9e3779b97f4a7c15ull * (++counter_)); }

  // uniform in [0, 1)
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // uniform in [lo, hi)
  double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xbf58476d1ce4e5b9ull;
    z ^= z >> 27;
    z *= 0x94d049bb133111ebull;
    z ^= z >> 31;
    return z;
  }

  std::uint64_t base_;
  std::uint64_t counter_ = 0;
};

}  // namespace spinlab
