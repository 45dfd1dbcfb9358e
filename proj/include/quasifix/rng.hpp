#pragma once

#include <cstdint>
#include <random>

namespace quasifix {

/// Deterministic RNG for sampling. mt19937_64 output mapped to doubles by
/// the top 53 bits, so sequences are reproducible across platforms.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t next() { return eng_(); }

  /// Uniform in [0, 1).
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Uniform in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n) { return next() % n; }

 private:
  std::mt19937_64 eng_;
};

}  // namespace quasifix
