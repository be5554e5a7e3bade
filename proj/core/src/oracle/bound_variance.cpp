#include "intervalkit/oracle/bound_variance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "intervalkit/core/errors.hpp"
#include "intervalkit/core/rng.hpp"
#include "intervalkit/core/task_pool.hpp"
#include "intervalkit/oracle/numerics.hpp"

namespace ik::oracle {

namespace {

std::size_t window_size(std::size_t n, double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw ConfigError("alpha must lie in (0, 1]");
  if (n == 0) throw ConfigError("empty sample");
  // Guard against alpha * n landing a rounding error above an integer.
  const double an = alpha * static_cast<double>(n);
  auto k = static_cast<std::size_t>(std::ceil(an - 1e-9));
  return std::clamp<std::size_t>(k, 1, n);
}

MomentPair moments(const std::vector<double>& v) {
  MomentPair m;
  for (double x : v) m.mean += x;
  m.mean /= static_cast<double>(v.size());
  for (double x : v) m.variance += (x - m.mean) * (x - m.mean);
  m.variance /= static_cast<double>(v.size() - 1);
  return m;
}

}  // namespace

EmpiricalInterval symmetric_quantile_interval(std::span<const double> sorted, double alpha) {
  const double lo = (1.0 - alpha) / 2.0;
  return {quantile_sorted(sorted.data(), sorted.size(), lo),
          quantile_sorted(sorted.data(), sorted.size(), 1.0 - lo)};
}

EmpiricalInterval min_width_interval(std::span<const double> sorted, double alpha) {
  const std::size_t k = window_size(sorted.size(), alpha);
  EmpiricalInterval best{sorted[0], sorted[k - 1]};
  for (std::size_t i = 1; i + k <= sorted.size(); ++i)
    if (sorted[i + k - 1] - sorted[i] < best.upper - best.lower) best = {sorted[i], sorted[i + k - 1]};
  return best;
}

EmpiricalInterval min_width_interval_exhaustive(std::span<const double> sorted, double alpha) {
  const std::size_t k = window_size(sorted.size(), alpha);
  EmpiricalInterval best{0.0, std::numeric_limits<double>::infinity()};
  bool found = false;
  for (std::size_t i = 0; i < sorted.size(); ++i)
    for (std::size_t j = i; j < sorted.size(); ++j) {
      if (j - i + 1 < k) continue;
      if (!found || sorted[j] - sorted[i] < best.upper - best.lower) {
        best = {sorted[i], sorted[j]};
        found = true;
      }
    }
  return best;
}

std::vector<BoundVarianceRow> bound_variance_experiment(const data::SyntheticSpec& distribution,
                                                        double alpha,
                                                        std::span<const std::size_t> sizes,
                                                        std::size_t resamples, std::uint64_t seed,
                                                        std::size_t jobs) {
  distribution.validate();
  if (resamples < 2) throw ConfigError("bound variance experiment needs at least 2 resamples");
  for (std::size_t s : sizes)
    if (s < 30) throw ConfigError("bound variance experiment needs sample sizes >= 30");

  const Rng master(seed);
  std::vector<BoundVarianceRow> rows;
  for (std::size_t size : sizes) {
    std::vector<EmpiricalInterval> sym(resamples), mw(resamples);
    parallel_for(resamples, jobs, [&](std::size_t k) {
      Rng rng = master.derive(static_cast<std::uint64_t>(size) * 1'000'003ULL + k);
      std::vector<double> y(size);
      for (double& v : y) v = data::draw_noise(distribution, rng);
      std::sort(y.begin(), y.end());
      sym[k] = symmetric_quantile_interval(y, alpha);
      mw[k] = min_width_interval(y, alpha);
    });
    std::vector<double> sl, su, ml, mu, sw, mww, diff;
    for (std::size_t k = 0; k < resamples; ++k) {
      sl.push_back(sym[k].lower);
      su.push_back(sym[k].upper);
      ml.push_back(mw[k].lower);
      mu.push_back(mw[k].upper);
      sw.push_back(sym[k].upper - sym[k].lower);
      mww.push_back(mw[k].upper - mw[k].lower);
      diff.push_back(sw.back() - mww.back());
    }
    BoundVarianceRow row;
    row.size = size;
    row.symmetric_lower = moments(sl);
    row.symmetric_upper = moments(su);
    row.min_width_lower = moments(ml);
    row.min_width_upper = moments(mu);
    row.symmetric_width = moments(sw);
    row.min_width_width = moments(mww);
    const MomentPair d = moments(diff);
    row.width_difference_mean = d.mean;
    row.width_difference_se = std::sqrt(d.variance / static_cast<double>(resamples));
    rows.push_back(row);
  }
  return rows;
}

}  // namespace ik::oracle
