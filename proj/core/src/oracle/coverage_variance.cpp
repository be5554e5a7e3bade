#include "intervalkit/oracle/coverage_variance.hpp"

#include <algorithm>
#include <cmath>

#include "intervalkit/core/errors.hpp"
#include "intervalkit/core/rng.hpp"
#include "intervalkit/core/task_pool.hpp"
#include "intervalkit/oracle/brute_force.hpp"

namespace ik::oracle {

bool VarianceCheck::mean_within_noise() const {
  return std::abs(mean_gap) <= 2.0 * mean_gap_se;
}

VarianceCheck variance_bound_check(const data::SyntheticSpec& distribution, double alpha,
                                   std::size_t n, std::size_t resamples, std::uint64_t seed,
                                   double lambda, std::size_t jobs) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw ConfigError("alpha must lie in (0, 1]");
  if (n < 2) throw ConfigError("variance check needs N >= 2");
  if (resamples < 50) throw ConfigError("variance check needs at least 50 resamples");
  const double an = alpha * static_cast<double>(n);
  if (std::abs(an - std::round(an)) > 1e-9)
    throw ConfigError("alpha * N must be an integer (got " + std::to_string(an) + ")");
  distribution.validate();

  VarianceCheck out;
  out.alpha = alpha;
  out.lambda = lambda;
  out.n = n;
  out.resamples = resamples;
  out.seed = seed;
  out.bound = 1.0 / (4.0 * static_cast<double>(n));
  out.gaps.assign(resamples, 0.0);

  if (alpha < 1.0) {
    losses::LossConfig loss;
    loss.family = lambda > 0.0 ? losses::LossFamily::RQR_W : losses::LossFamily::RQR;
    loss.alpha = alpha;
    loss.lambda = lambda;
    const Rng master(seed);
    parallel_for(resamples, jobs, [&](std::size_t k) {
      Rng rng = master.derive(k);
      std::vector<double> y(n);
      for (double& v : y) v = data::draw_noise(distribution, rng);
      const OracleResult r = exact_pair_search(loss, y);
      out.gaps[k] = data::noise_cdf(distribution, r.mu2) - data::noise_cdf(distribution, r.mu1) - alpha;
    });
  }

  const double m = static_cast<double>(resamples);
  double sum_gap = 0.0, sum_q = 0.0;
  for (double g : out.gaps) {
    sum_gap += g;
    sum_q += std::abs(g);
  }
  out.mean_gap = sum_gap / m;
  out.mean_miscoverage = sum_q / m;
  double ss_gap = 0.0, ss_q = 0.0, m4_q = 0.0;
  for (double g : out.gaps) {
    const double dg = g - out.mean_gap;
    const double dq = std::abs(g) - out.mean_miscoverage;
    ss_gap += dg * dg;
    ss_q += dq * dq;
    m4_q += dq * dq * dq * dq;
  }
  out.gap_variance = ss_gap / (m - 1.0);
  out.mean_gap_se = std::sqrt(out.gap_variance / m);
  out.variance = ss_q / (m - 1.0);
  // Large-sample standard error of a sample variance: sqrt((mu4 - sigma^4) / M).
  const double mu4 = m4_q / m;
  const double s2 = ss_q / m;
  out.variance_se = std::sqrt(std::max(0.0, mu4 - s2 * s2) / m);
  return out;
}

}  // namespace ik::oracle
