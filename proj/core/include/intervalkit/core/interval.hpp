#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace ik {

/// A single (lower, upper) pair as produced by a model; not necessarily ordered.
struct Bounds {
  double mu1 = 0.0;
  double mu2 = 0.0;
};

/// Per-example interval bounds with lower[i] <= upper[i] for every i.
///
/// The only way to build one is canonicalize(), which takes the element-wise
/// min and max of two raw model outputs, so the ordering invariant holds by
/// construction and either output head may act as either bound.
class IntervalBatch {
 public:
  IntervalBatch() = default;

  /// Throws StructuralError on a length mismatch.
  static IntervalBatch canonicalize(std::span<const double> raw_lower,
                                    std::span<const double> raw_upper);

  std::size_t size() const noexcept { return lower_.size(); }
  bool empty() const noexcept { return lower_.empty(); }

  const std::vector<double>& lower() const noexcept { return lower_; }
  const std::vector<double>& upper() const noexcept { return upper_; }

  double width(std::size_t i) const { return upper_[i] - lower_[i]; }
  /// Closed-interval membership, lower <= y <= upper.
  bool covers(std::size_t i, double y) const { return lower_[i] <= y && y <= upper_[i]; }

  bool operator==(const IntervalBatch&) const = default;

 private:
  std::vector<double> lower_;
  std::vector<double> upper_;
};

/// Target coverage and the training-time target used by the loss.
///
/// For the width-penalized loss the training target is alpha + 2*lambda,
/// which removes the coverage bias the squared-width penalty introduces. The
/// corrected value may exceed 1; the coverage identity does not need it to be
/// a probability. `above_one` records that case so callers can warn.
struct CoverageTarget {
  double alpha = 0.9;
  double alpha_hat = 0.9;
  bool above_one = false;

  /// Throws ConfigError unless alpha is in (0, 1) and lambda >= 0.
  static CoverageTarget plain(double alpha);
  static CoverageTarget width_corrected(double alpha, double lambda);
};

}  // namespace ik
