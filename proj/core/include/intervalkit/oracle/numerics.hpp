#pragma once

#include <cstddef>
#include <functional>

namespace ik::oracle {

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
  std::size_t evaluations = 0;
};

/// Adaptive Simpson with Richardson correction. Every branch is split at least
/// `min_depth` times before the error test applies, so a narrow peak cannot
/// hide between the first three nodes. Throws NumericError when `max_depth`
/// is exhausted before the tolerance is met.
QuadratureResult adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                                  double abs_tol, int max_depth = 50, int min_depth = 6);

struct Minimum1d {
  double x = 0.0;
  double fx = 0.0;
  std::size_t evaluations = 0;
};

/// Golden-section search on [a, b] until the bracket is narrower than `tol`.
Minimum1d golden_section(const std::function<double(double)>& f, double a, double b, double tol);

/// Type-7 (linear interpolation) empirical quantile of sorted data.
double quantile_sorted(const double* sorted, std::size_t n, double p);

}  // namespace ik::oracle
