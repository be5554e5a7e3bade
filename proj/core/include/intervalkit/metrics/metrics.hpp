#pragma once

#include <cstddef>
#include <span>

#include "intervalkit/core/interval.hpp"

namespace ik::metrics {

struct EvalReport {
  double picp = 0.0;
  double mpiw = 0.0;
  double wcpc = 0.0;
  double hsic = 0.0;
  std::size_t n = 0;
  bool wcpc_degenerate = false;

  bool operator==(const EvalReport&) const = default;
};

/// Fraction of targets inside the closed interval. Throws ConfigError when empty.
double picp(const IntervalBatch& intervals, std::span<const double> y);
double mpiw(const IntervalBatch& intervals);

struct Correlation {
  double value = 0.0;
  bool degenerate = false;
};

/// |Pearson(width, covered)|; 0 and flagged when either vector is constant.
/// Throws ConfigError for fewer than 2 examples.
Correlation wcpc(const IntervalBatch& intervals, std::span<const double> y);

struct HsicOptions {
  /// Gaussian kernel bandwidths; 0 selects the median pairwise distance
  /// (falling back to 1 when that median is 0, as for mostly-equal binaries).
  double bandwidth_w = 0.0;
  double bandwidth_m = 0.0;
};

/// sqrt(tr(K H R H)) / (N - 1) with K over widths, R over coverage indicators.
double hsic(const IntervalBatch& intervals, std::span<const double> y, HsicOptions options = {});
/// The same statistic on raw vectors; symmetric in its two arguments.
double hsic(std::span<const double> a, std::span<const double> b, HsicOptions options = {});

/// Median of |v_i - v_j| over i < j, on an evenly strided subsample for large inputs.
double median_pairwise_distance(std::span<const double> v);

EvalReport evaluate(const IntervalBatch& intervals, std::span<const double> y,
                    HsicOptions options = {});

}  // namespace ik::metrics
