#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "intervalkit/core/matrix.hpp"

namespace ik {

/// Statistics fitted on the training rows and applied to every row.
struct Preprocessing {
  bool fitted = false;
  std::vector<double> feature_mean;
  std::vector<double> feature_std;  // constant columns store 1
  double target_scale = 1.0;        // training-split target mean
  bool target_scaled = false;       // false when that mean was ~0

  double apply_target(double y) const { return target_scaled ? y / target_scale : y; }
  double invert_target(double y) const { return target_scaled ? y * target_scale : y; }

  bool operator==(const Preprocessing&) const = default;
};

struct Dataset {
  std::string name;
  Matrix features;  // N x d
  std::vector<double> targets;
  Preprocessing preprocessing;

  std::size_t size() const noexcept { return targets.size(); }
  std::size_t feature_count() const noexcept { return features.cols(); }

  /// Throws StructuralError when the row count and target count differ.
  void validate() const;

  /// Rows `indices`, in that order, sharing this dataset's preprocessing record.
  Dataset subset(std::span<const std::size_t> indices) const;
};

struct SplitRatios {
  double train = 0.6;
  double val = 0.2;
  double test = 0.2;

  /// Width-benchmark protocol.
  static constexpr SplitRatios width_protocol() { return {0.6, 0.2, 0.2}; }
  /// Orthogonality-benchmark protocol: 40% test, the rest split 0.9/0.1.
  static constexpr SplitRatios orthogonal_protocol() { return {0.54, 0.06, 0.40}; }
};

struct Split {
  std::vector<std::size_t> train;
  std::vector<std::size_t> val;
  std::vector<std::size_t> test;
  std::uint64_t seed = 0;
};

/// Seeded shuffle of 0..n-1 cut into contiguous train/val/test slices.
/// Sizes are round(ratio * n) for train and val; test takes the remainder.
/// Throws ConfigError when the ratios do not sum to 1 or a slice is empty.
Split make_split(std::size_t n, SplitRatios ratios, std::uint64_t seed);

}  // namespace ik
