#include "intervalkit/metrics/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "intervalkit/core/errors.hpp"

namespace ik::metrics {

namespace {

constexpr std::size_t kMedianSample = 1500;

void check(const IntervalBatch& intervals, std::span<const double> y, std::size_t min_n,
           const char* who) {
  if (intervals.size() != y.size())
    throw StructuralError(std::string(who) + ": intervals and targets differ in length");
  if (intervals.size() < min_n)
    throw ConfigError(std::string(who) + " needs at least " + std::to_string(min_n) +
                      " example(s)");
}

std::vector<double> coverage_indicators(const IntervalBatch& intervals, std::span<const double> y) {
  std::vector<double> m(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) m[i] = intervals.covers(i, y[i]) ? 1.0 : 0.0;
  return m;
}

std::vector<double> widths(const IntervalBatch& intervals) {
  std::vector<double> w(intervals.size());
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = intervals.width(i);
  return w;
}

double resolve_bandwidth(double requested, std::span<const double> v) {
  if (requested > 0.0) return requested;
  const double med = median_pairwise_distance(v);
  return med > 0.0 ? med : 1.0;
}

}  // namespace

double picp(const IntervalBatch& intervals, std::span<const double> y) {
  check(intervals, y, 1, "picp");
  std::size_t covered = 0;
  for (std::size_t i = 0; i < y.size(); ++i)
    if (intervals.covers(i, y[i])) ++covered;
  return static_cast<double>(covered) / static_cast<double>(y.size());
}

double mpiw(const IntervalBatch& intervals) {
  if (intervals.empty()) throw ConfigError("mpiw needs at least 1 example");
  double total = 0.0;
  for (std::size_t i = 0; i < intervals.size(); ++i) total += intervals.width(i);
  return total / static_cast<double>(intervals.size());
}

Correlation wcpc(const IntervalBatch& intervals, std::span<const double> y) {
  check(intervals, y, 2, "wcpc");
  const auto w = widths(intervals);
  const auto m = coverage_indicators(intervals, y);
  const double n = static_cast<double>(w.size());
  double wm = 0.0, mm = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    wm += w[i];
    mm += m[i];
  }
  wm /= n;
  mm /= n;
  double sww = 0.0, smm = 0.0, swm = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    sww += (w[i] - wm) * (w[i] - wm);
    smm += (m[i] - mm) * (m[i] - mm);
    swm += (w[i] - wm) * (m[i] - mm);
  }
  if (!(sww > 0.0) || !(smm > 0.0)) return {0.0, true};
  return {std::min(1.0, std::abs(swm) / std::sqrt(sww * smm)), false};
}

double median_pairwise_distance(std::span<const double> v) {
  std::vector<double> sample;
  if (v.size() > kMedianSample) {
    sample.reserve(kMedianSample);
    for (std::size_t k = 0; k < kMedianSample; ++k) sample.push_back(v[k * v.size() / kMedianSample]);
  } else {
    sample.assign(v.begin(), v.end());
  }
  std::vector<double> d;
  d.reserve(sample.size() * (sample.size() - 1) / 2);
  for (std::size_t i = 0; i < sample.size(); ++i)
    for (std::size_t j = i + 1; j < sample.size(); ++j) d.push_back(std::abs(sample[i] - sample[j]));
  if (d.empty()) return 0.0;
  const auto mid = d.begin() + static_cast<std::ptrdiff_t>(d.size() / 2);
  std::nth_element(d.begin(), mid, d.end());
  if (d.size() % 2 == 1) return *mid;
  const double hi = *mid;
  const double lo = *std::max_element(d.begin(), mid);
  return 0.5 * (lo + hi);
}

double hsic(std::span<const double> a, std::span<const double> b, HsicOptions options) {
  if (a.size() != b.size()) throw StructuralError("hsic: vectors differ in length");
  const std::size_t n = a.size();
  if (n < 2) throw ConfigError("hsic needs at least 2 examples");
  const double sa = resolve_bandwidth(options.bandwidth_w, a);
  const double sb = resolve_bandwidth(options.bandwidth_m, b);
  const double ga = 1.0 / (2.0 * sa * sa);
  const double gb = 1.0 / (2.0 * sb * sb);

  // tr(K H R H) = sum_ij (H K H)_ij R_ij; double-centre K on the fly so memory stays O(N).
  std::vector<double> row_mean(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      const double d = a[i] - a[j];
      const double k = std::exp(-ga * d * d);
      row_mean[i] += k;
      if (j != i) row_mean[j] += k;
    }
  }
  double grand = 0.0;
  for (double& r : row_mean) {
    r /= static_cast<double>(n);
    grand += r;
  }
  grand /= static_cast<double>(n);

  double trace = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    trace += (1.0 - 2.0 * row_mean[i] + grand);  // K_ii = R_ii = 1
    for (std::size_t j = i + 1; j < n; ++j) {
      const double da = a[i] - a[j];
      const double db = b[i] - b[j];
      const double kc = std::exp(-ga * da * da) - row_mean[i] - row_mean[j] + grand;
      trace += 2.0 * kc * std::exp(-gb * db * db);
    }
  }
  return std::sqrt(std::max(0.0, trace)) / static_cast<double>(n - 1);
}

double hsic(const IntervalBatch& intervals, std::span<const double> y, HsicOptions options) {
  check(intervals, y, 2, "hsic");
  const auto w = widths(intervals);
  const auto m = coverage_indicators(intervals, y);
  return hsic(w, m, options);
}

EvalReport evaluate(const IntervalBatch& intervals, std::span<const double> y,
                    HsicOptions options) {
  check(intervals, y, 1, "evaluate");
  EvalReport r;
  r.n = y.size();
  r.picp = picp(intervals, y);
  r.mpiw = mpiw(intervals);
  if (y.size() >= 2) {
    const Correlation c = wcpc(intervals, y);
    r.wcpc = c.value;
    r.wcpc_degenerate = c.degenerate;
    r.hsic = hsic(intervals, y, options);
  }
  return r;
}

}  // namespace ik::metrics
