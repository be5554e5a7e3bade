#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

namespace ik {

/// Seeded random stream. Every draw is derived from raw 64-bit engine output
/// with fixed arithmetic, so identical seeds give identical streams on every
/// conforming platform (std::mt19937_64's output sequence is fully specified;
/// the std distribution adaptors are not, so none are used).
///
/// A stream is single-owner. Parallel tasks take their own stream via derive().
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t seed() const noexcept { return seed_; }

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on [0, 1) with 53 bits of resolution.
  double uniform();
  /// Uniform on the open interval (0, 1).
  double uniform_open();
  double uniform(double lo, double hi);

  /// Standard normal by inversion of a uniform_open() draw.
  double normal();
  double normal(double mean, double stddev);

  /// Standard Gumbel (CDF exp(-exp(-x))) by inversion.
  double gumbel();

  /// Unbiased integer in [0, n). n must be positive.
  std::uint64_t below(std::uint64_t n);

  /// Uniformly random permutation of 0..n-1 (Fisher-Yates).
  std::vector<std::size_t> permutation(std::size_t n);

  /// Independent stream for task `index` of this stream's seed.
  Rng derive(std::uint64_t index) const;

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

/// SplitMix64 finalizer; used to decorrelate derived seeds.
std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) noexcept;

}  // namespace ik
