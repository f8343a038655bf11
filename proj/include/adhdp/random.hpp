#pragma once

#include <cstdint>

namespace adhdp {

// Portable seeded generator: SplitMix64 expands the user seed into the state,
// xorshift64* (shifts 12/25/27, multiplier 0x2545F4914F6CDD1D) produces the
// stream. Both are fully specified so other languages can reproduce the
// exact sequence.
class Xorshift64Star {
public:
  explicit Xorshift64Star(std::uint64_t seed) : state_(splitmix64(seed)) {
    if (state_ == 0) state_ = 0x9E3779B97F4A7C15ULL;
  }

  std::uint64_t next_u64() {
    state_ ^= state_ >> 12;
    state_ ^= state_ << 25;
    state_ ^= state_ >> 27;
    return state_ * 0x2545F4914F6CDD1DULL;
  }

  // Uniform on [0, 1) with 53 bits of resolution.
  double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform on [lo, hi].
  double uniform(double lo, double hi) { return lo + (hi - lo) * next_unit(); }

  static std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
  }

private:
  std::uint64_t state_;
};

}  // namespace adhdp
