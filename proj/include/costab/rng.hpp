#pragma once

#include <cstdint>

namespace costab {

/// Deterministic xoshiro-style generator; used instead of <random>
/// distributions so that seeded runs are reproducible across library
/// versions.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0x9e3779b97f4a7c15ull) {
    s_ = seed ? seed : 1;
    for (int i = 0; i < 8; ++i) next();
  }

  std::uint64_t next() {
    s_ ^= s_ << 13;
    s_ ^= s_ >> 7;
    s_ ^= s_ << 17;
    return s_;
  }

  /// uniform in [0, 1)
  double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// uniform in [lo, hi]
  int range(int lo, int hi) {
    return lo + static_cast<int>(next() % static_cast<std::uint64_t>(hi - lo + 1));
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }

 private:
  std::uint64_t s_;
};

}  // namespace costab
