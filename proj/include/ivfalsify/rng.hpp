#pragma once

#include <cstdint>

namespace ivfalsify {

/// Small deterministic PRNG (SplitMix64). Used instead of <random>
/// distributions so seeded test suites and the simulator produce identical
/// streams on every platform and standard library.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform draw in [0, bound); bound must be positive.
  std::uint64_t below(std::uint64_t bound) {
    // Multiply-shift reduction; bias is negligible for the small bounds used.
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(next()) * bound) >> 64);
  }

  /// True with probability num/den.
  bool chance(std::uint64_t num, std::uint64_t den) { return below(den) < num; }

 private:
  std::uint64_t state_;
};

}  // namespace ivfalsify
