#include "intervalkit/data/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "intervalkit/core/errors.hpp"
#include "intervalkit/core/normal.hpp"

namespace ik::data {

std::string_view to_string(NoiseKind kind) {
  switch (kind) {
    case NoiseKind::gaussian_noise: return "gaussian_noise";
    case NoiseKind::truncated_gaussian_noise: return "truncated_gaussian_noise";
    case NoiseKind::lognormal: return "lognormal";
    case NoiseKind::gumbel: return "gumbel";
  }
  return "unknown";
}

NoiseKind parse_noise_kind(std::string_view name) {
  for (auto k : {NoiseKind::gaussian_noise, NoiseKind::truncated_gaussian_noise,
                 NoiseKind::lognormal, NoiseKind::gumbel})
    if (to_string(k) == name) return k;
  throw ConfigError("unknown synthetic kind '" + std::string(name) + "'");
}

std::string_view to_string(XMode mode) {
  return mode == XMode::constant ? "constant" : "uniform";
}

XMode parse_x_mode(std::string_view name) {
  if (name == "constant") return XMode::constant;
  if (name == "uniform") return XMode::uniform;
  throw ConfigError("unknown x_mode '" + std::string(name) + "'");
}

void SyntheticSpec::validate() const {
  if (n == 0) throw ConfigError("synthetic spec: n must be positive");
  if (!(std > 0.0)) throw ConfigError("synthetic spec: std must be positive");
  if (!(log_sigma > 0.0)) throw ConfigError("synthetic spec: log_sigma must be positive");
  if (!(lower < upper)) throw ConfigError("synthetic spec: truncation lower must be < upper");
  if (x_mode == XMode::uniform && !(x_low < x_high))
    throw ConfigError("synthetic spec: x_low must be < x_high");
  if (!(hetero_slope >= 0.0)) throw ConfigError("synthetic spec: hetero_slope must be >= 0");
}

double truncated_gaussian_draw(double mean, double std, double lower, double upper, Rng& rng) {
  if (!(std > 0.0)) throw ConfigError("truncated gaussian: std must be positive");
  if (!(lower < upper)) throw ConfigError("truncated gaussian: lower must be < upper");
  const double a = (lower - mean) / std;
  const double b = (upper - mean) / std;
  const double u = rng.uniform_open();
  double z;
  if (a > 0.0) {
    const double sa = normal_sf(a);
    const double sb = normal_sf(b);
    const double mass = sa - sb;
    if (!(mass >= 1e-12)) throw ConfigError("truncated gaussian: window holds negligible mass");
    z = -normal_quantile(sa - u * mass);
  } else {
    const double fa = normal_cdf(a);
    const double fb = normal_cdf(b);
    const double mass = fb - fa;
    if (!(mass >= 1e-12)) throw ConfigError("truncated gaussian: window holds negligible mass");
    z = normal_quantile(fa + u * mass);
  }
  // Rounding in the tails can land a hair outside the window.
  return std::clamp(mean + std * z, lower, upper);
}

double draw_noise(const SyntheticSpec& spec, Rng& rng) {
  switch (spec.kind) {
    case NoiseKind::gaussian_noise:
      return rng.normal(spec.mean, spec.std);
    case NoiseKind::truncated_gaussian_noise:
      return truncated_gaussian_draw(spec.mean, spec.std, spec.lower, spec.upper, rng);
    case NoiseKind::lognormal:
      return std::exp(rng.normal(spec.log_mu, spec.log_sigma));
    case NoiseKind::gumbel:
      return spec.mean + spec.std * rng.gumbel();
  }
  throw ConfigError("unknown synthetic kind");
}

double noise_cdf(const SyntheticSpec& spec, double x) {
  switch (spec.kind) {
    case NoiseKind::gaussian_noise:
      return normal_cdf((x - spec.mean) / spec.std);
    case NoiseKind::truncated_gaussian_noise: {
      if (x <= spec.lower) return 0.0;
      if (x >= spec.upper) return 1.0;
      const double a = (spec.lower - spec.mean) / spec.std;
      const double b = (spec.upper - spec.mean) / spec.std;
      const double z = (x - spec.mean) / spec.std;
      if (a > 0.0) return (normal_sf(a) - normal_sf(z)) / (normal_sf(a) - normal_sf(b));
      return (normal_cdf(z) - normal_cdf(a)) / (normal_cdf(b) - normal_cdf(a));
    }
    case NoiseKind::lognormal:
      return x <= 0.0 ? 0.0 : normal_cdf((std::log(x) - spec.log_mu) / spec.log_sigma);
    case NoiseKind::gumbel:
      return std::exp(-std::exp(-(x - spec.mean) / spec.std));
  }
  throw ConfigError("unknown synthetic kind");
}

Dataset generate(const SyntheticSpec& spec, std::uint64_t seed) {
  spec.validate();
  Rng rng(seed);
  Dataset ds;
  ds.name = spec.name;
  ds.features = Matrix(spec.n, 1);
  ds.targets.resize(spec.n);
  for (std::size_t i = 0; i < spec.n; ++i) {
    const double x =
        spec.x_mode == XMode::constant ? spec.location : rng.uniform(spec.x_low, spec.x_high);
    const double eps = draw_noise(spec, rng);
    ds.features(i, 0) = x;
    ds.targets[i] = x + (1.0 + spec.hetero_slope * std::abs(x)) * eps;
  }
  return ds;
}

}  // namespace ik::data
