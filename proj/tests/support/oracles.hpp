#pragma once

// Reference computations used only by the tests. They are deliberately naive
// and share no code with the library.

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace ik::testing {

/// Central difference of f at x along coordinate i.
double central_difference(const std::function<double(const std::vector<double>&)>& f,
                          std::vector<double> x, std::size_t i, double step = 1e-6);

/// |a - b| / max(|a|, |b|, floor).
double relative_error(double a, double b, double floor = 1e-8);

/// sqrt(tr(K H R H)) / (N - 1) with explicit N x N matrices.
double naive_hsic(const std::vector<double>& a, const std::vector<double>& b, double sigma_a,
                  double sigma_b);

/// Pearson r from the textbook two-pass formula.
double naive_pearson(const std::vector<double>& a, const std::vector<double>& b);

/// Truncated normal by rejection from an independent std::mt19937_64 and
/// std::normal_distribution (no library RNG code involved).
std::vector<double> rejection_truncated_normal(double mean, double std, double lower, double upper,
                                               std::size_t n, std::uint64_t seed);

/// Two-sample Kolmogorov-Smirnov statistic sup |F_a - F_b|.
double ks_statistic(std::vector<double> a, std::vector<double> b);

/// Sample mean and (n - 1) variance.
double mean_of(std::span<const double> v);
double variance_of(std::span<const double> v);

}  // namespace ik::testing
