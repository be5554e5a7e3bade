#include "support/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace ik::testing {

double central_difference(const std::function<double(const std::vector<double>&)>& f,
                          std::vector<double> x, std::size_t i, double step) {
  const double x0 = x[i];
  x[i] = x0 + step;
  const double up = f(x);
  x[i] = x0 - step;
  const double down = f(x);
  return (up - down) / (2.0 * step);
}

double relative_error(double a, double b, double floor) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), floor});
}

double naive_hsic(const std::vector<double>& a, const std::vector<double>& b, double sigma_a,
                  double sigma_b) {
  const std::size_t n = a.size();
  auto gram = [n](const std::vector<double>& v, double s) {
    std::vector<std::vector<double>> k(n, std::vector<double>(n));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) k[i][j] = std::exp(-(v[i] - v[j]) * (v[i] - v[j]) / (2 * s * s));
    return k;
  };
  auto mul = [n](const std::vector<std::vector<double>>& x, const std::vector<std::vector<double>>& y) {
    std::vector<std::vector<double>> z(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = 0; k < n; ++k)
        for (std::size_t j = 0; j < n; ++j) z[i][j] += x[i][k] * y[k][j];
    return z;
  };
  std::vector<std::vector<double>> h(n, std::vector<double>(n, -1.0 / static_cast<double>(n)));
  for (std::size_t i = 0; i < n; ++i) h[i][i] += 1.0;
  const auto prod = mul(mul(mul(gram(a, sigma_a), h), gram(b, sigma_b)), h);
  double tr = 0.0;
  for (std::size_t i = 0; i < n; ++i) tr += prod[i][i];
  return std::sqrt(std::max(0.0, tr)) / static_cast<double>(n - 1);
}

double naive_pearson(const std::vector<double>& a, const std::vector<double>& b) {
  const double ma = mean_of(a), mb = mean_of(b);
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  return sab / std::sqrt(saa * sbb);
}

std::vector<double> rejection_truncated_normal(double mean, double std, double lower, double upper,
                                               std::size_t n, std::uint64_t seed) {
  std::mt19937_64 engine(seed);
  std::normal_distribution<double> dist(mean, std);
  std::vector<double> out;
  out.reserve(n);
  while (out.size() < n) {
    const double x = dist(engine);
    if (x >= lower && x <= upper) out.push_back(x);
  }
  return out;
}

double ks_statistic(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / a.size() - static_cast<double>(j) / b.size()));
  }
  return d;
}

double mean_of(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double variance_of(std::span<const double> v) {
  const double m = mean_of(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return s / static_cast<double>(v.size() - 1);
}

}  // namespace ik::testing
