#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "intervalkit/data/synthetic.hpp"

namespace ik::oracle {

struct VarianceCheck {
  double alpha = 0.0;
  double lambda = 0.0;
  std::size_t n = 0;
  std::size_t resamples = 0;
  std::uint64_t seed = 0;

  /// Signed true-coverage gaps F(mu2) - F(mu1) - alpha, one per resample.
  std::vector<double> gaps;
  double mean_gap = 0.0;
  double mean_gap_se = 0.0;
  /// Q_N = |gap|.
  double mean_miscoverage = 0.0;
  double variance = 0.0;     // sample variance of Q_N
  double variance_se = 0.0;  // Monte Carlo standard error of that variance
  double gap_variance = 0.0;
  double bound = 0.0;  // 1 / (4N)

  bool variance_within_bound() const { return variance <= bound + 3.0 * variance_se; }
  bool mean_within_noise() const;
};

/// Draws `resamples` independent N-sample sets from the noise distribution of
/// `distribution`, minimizes the relaxed loss exactly on each (RQR, or RQR_W at
/// alpha + 2 lambda when lambda > 0) and measures the minimizer's true
/// coverage against the noise CDF. alpha = 1 is the full line: every gap is 0.
/// Throws ConfigError unless alpha*N is an integer and resamples >= 50.
VarianceCheck variance_bound_check(const data::SyntheticSpec& distribution, double alpha,
                                   std::size_t n, std::size_t resamples, std::uint64_t seed,
                                   double lambda = 0.0, std::size_t jobs = 1);

}  // namespace ik::oracle
