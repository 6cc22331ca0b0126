#pragma once

#include <cstdint>
#include <random>

#include "rwuq/types.hpp"

namespace rwuq {

/// Portable seeded generator. The engine is std::mt19937_64, whose output
/// sequence is fixed by the standard; all derived variates are computed here
/// rather than through <random> distributions, whose algorithms are
/// implementation-defined.
class Rng {
 public:
  static constexpr const char* kIdentity = "mt19937_64/u53/marsaglia-polar";

  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }
  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  /// Uniform integer in [0, n) by rejection (no modulo bias).
  std::uint64_t below(std::uint64_t n);
  double normal();
  /// Circular complex Gaussian with E|z|^2 = variance.
  Complex complex_normal(double variance);

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

/// SplitMix64 finalizer, used to derive independent stream seeds.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt);

}  // namespace rwuq
