#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "intervalkit/data/synthetic.hpp"

namespace ik::oracle {

struct EmpiricalInterval {
  double lower = 0.0;
  double upper = 0.0;
};

/// Type-7 quantiles at (1-alpha)/2 and 1-(1-alpha)/2 of sorted data.
EmpiricalInterval symmetric_quantile_interval(std::span<const double> sorted, double alpha);
/// Narrowest window of ceil(alpha N) consecutive sorted samples.
EmpiricalInterval min_width_interval(std::span<const double> sorted, double alpha);
/// Narrowest [s_i, s_j] over every pair holding at least ceil(alpha N) samples. O(N^2).
EmpiricalInterval min_width_interval_exhaustive(std::span<const double> sorted, double alpha);

struct MomentPair {
  double mean = 0.0;
  double variance = 0.0;
};

struct BoundVarianceRow {
  std::size_t size = 0;
  MomentPair symmetric_lower;
  MomentPair symmetric_upper;
  MomentPair min_width_lower;
  MomentPair min_width_upper;
  MomentPair symmetric_width;
  MomentPair min_width_width;
  /// Monte Carlo standard error of the mean difference of the two widths.
  double width_difference_se = 0.0;
  double width_difference_mean = 0.0;
};

/// Per sample size, the across-resample mean and variance of both estimators'
/// bounds. Resample k of size s uses stream derive(s * 1'000'003 + k) of `seed`.
std::vector<BoundVarianceRow> bound_variance_experiment(const data::SyntheticSpec& distribution,
                                                        double alpha,
                                                        std::span<const std::size_t> sizes,
                                                        std::size_t resamples, std::uint64_t seed,
                                                        std::size_t jobs = 1);

}  // namespace ik::oracle
