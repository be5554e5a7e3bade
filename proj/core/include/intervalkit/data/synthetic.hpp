#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>

#include "intervalkit/core/dataset.hpp"
#include "intervalkit/core/rng.hpp"

namespace ik::data {

enum class NoiseKind { gaussian_noise, truncated_gaussian_noise, lognormal, gumbel };
enum class XMode { constant, uniform };

std::string_view to_string(NoiseKind kind);
NoiseKind parse_noise_kind(std::string_view name);
std::string_view to_string(XMode mode);
XMode parse_x_mode(std::string_view name);

/// Y = X + s(X) * eps with s(X) = 1 + hetero_slope * |X|.
///
/// X is `location` in constant mode, or Uniform(x_low, x_high) otherwise; the
/// single feature column holds X. eps depends on the kind:
///   gaussian_noise            N(mean, std)
///   truncated_gaussian_noise  N(mean, std) conditioned on [lower, upper]
///   lognormal                 exp(N(log_mu, log_sigma))
///   gumbel                    standard Gumbel shifted by mean, scaled by std
struct SyntheticSpec {
  NoiseKind kind = NoiseKind::gaussian_noise;
  std::size_t n = 1000;
  XMode x_mode = XMode::constant;
  double location = 0.0;
  double x_low = -1.0;
  double x_high = 1.0;
  double hetero_slope = 0.0;

  double mean = 0.0;
  double std = 1.0;
  double lower = -1e9;
  double upper = 1e9;
  double log_mu = 0.35;
  double log_sigma = 1.5;

  std::string name = "synthetic";

  /// Throws ConfigError on nonpositive scales, empty n or lower >= upper.
  void validate() const;
};

/// One draw of eps (before the heteroskedastic scale).
double draw_noise(const SyntheticSpec& spec, Rng& rng);

/// CDF of eps (before the heteroskedastic scale).
double noise_cdf(const SyntheticSpec& spec, double x);

Dataset generate(const SyntheticSpec& spec, std::uint64_t seed);

/// Gaussian conditioned on [lower, upper] by inverting the CDF on the
/// restricted mass. Upper-tail windows invert the survival function instead,
/// which keeps precision far from the mean. With bounds that hold all the mass
/// this consumes one uniform exactly like Rng::normal() and returns the same
/// value. Throws ConfigError when the mass is below 1e-12.
double truncated_gaussian_draw(double mean, double std, double lower, double upper, Rng& rng);

}  // namespace ik::data
