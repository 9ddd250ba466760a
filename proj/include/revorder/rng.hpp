#pragma once

#include <cstdint>

namespace revorder {

/// SplitMix64 stream generator. Small state, cheap to seed, good enough
/// statistical quality for data synthesis; one independent stream per record
/// keeps synthesis embarrassingly parallel and order-free.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// The output scrambler alone; used to derive well-separated per-record
  /// seeds from (base seed, record index).
  static std::uint64_t mix(std::uint64_t x) {
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
  }

  /// Unbiased uniform draw from [0, bound); bound must be nonzero.
  std::uint64_t below(std::uint64_t bound) {
    std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
      std::uint64_t r = next();
      if (r >= threshold) return r % bound;
    }
  }

  /// Uniform draw from the closed range [lo, hi].
  std::uint64_t range(std::uint64_t lo, std::uint64_t hi) {
    return lo + below(hi - lo + 1);
  }

  /// True with probability p, using the top 53 bits of one draw.
  bool bernoulli(double p) {
    if (p <= 0.0) return false;
    if (p >= 1.0) return true;
    return (next() >> 11) < static_cast<std::uint64_t>(p * 9007199254740992.0);
  }

 private:
  std::uint64_t state_;
};

}  // namespace revorder
