#include "intervalkit/oracle/gumbel.hpp"

#include <algorithm>
#include <cmath>

#include "intervalkit/core/errors.hpp"
#include "intervalkit/oracle/numerics.hpp"

namespace ik::oracle {

namespace {

constexpr double kLo = -12.0;
constexpr double kHi = 40.0;
constexpr double kTol = 1e-8;

}  // namespace

double gumbel_cdf(double x) { return std::exp(-std::exp(-x)); }

double gumbel_pdf(double x) { return std::exp(-x - std::exp(-x)); }

double gumbel_mu_l_limit(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigError("alpha must lie in (0, 1)");
  return -std::log(-std::log(1.0 - alpha));
}

double gumbel_upper(double alpha, double mu_l) {
  const double t = alpha + gumbel_cdf(mu_l);
  if (!(t < 1.0)) throw DomainError("alpha + CDF(mu_l) >= 1: no interval with that coverage");
  return -std::log(-std::log(t));
}

double gumbel_width(double alpha, double mu_l) { return gumbel_upper(alpha, mu_l) - mu_l; }

double gumbel_density_mass() {
  return adaptive_simpson(gumbel_pdf, kLo, 0.0, kTol / 2).value +
         adaptive_simpson(gumbel_pdf, 0.0, kHi, kTol / 2).value;
}

double gumbel_expected_loss(losses::LossFamily family, double alpha, double lambda, double mu_l) {
  if (family != losses::LossFamily::RQR && family != losses::LossFamily::RQR_W)
    throw ConfigError("gumbel_expected_loss supports RQR and RQR_W");
  const double mu_u = gumbel_upper(alpha, mu_l);
  auto integrand = [&](double y) {
    return losses::rqr_loss({mu_l, mu_u}, y, alpha) * gumbel_pdf(y);
  };
  // The integrand has kinks at both bounds; integrate the smooth pieces separately.
  double cuts[4] = {kLo, std::clamp(mu_l, kLo, kHi), std::clamp(mu_u, kLo, kHi), kHi};
  double total = 0.0;
  for (int k = 0; k < 3; ++k)
    if (cuts[k + 1] > cuts[k]) total += adaptive_simpson(integrand, cuts[k], cuts[k + 1], kTol / 3).value;
  if (family == losses::LossFamily::RQR_W) {
    const double w = mu_u - mu_l;
    total += 0.5 * lambda * w * w;
  }
  return total;
}

GumbelMinimum gumbel_argmin(losses::LossFamily family, double alpha, double lambda) {
  const double limit = gumbel_mu_l_limit(alpha);
  const Minimum1d m = golden_section(
      [&](double x) { return gumbel_expected_loss(family, alpha, lambda, x); }, limit - 6.0,
      limit - 1e-9, 1e-6);
  return {m.x, gumbel_upper(alpha, m.x), gumbel_width(alpha, m.x), m.fx};
}

std::vector<GumbelCurvePoint> gumbel_curve(losses::LossFamily family, double alpha, double lambda,
                                           double mu_l_lo, double mu_l_hi, std::size_t points) {
  if (points < 2) throw ConfigError("gumbel_curve needs at least 2 points");
  std::vector<GumbelCurvePoint> out;
  out.reserve(points);
  for (std::size_t k = 0; k < points; ++k) {
    const double x =
        mu_l_lo + (mu_l_hi - mu_l_lo) * static_cast<double>(k) / static_cast<double>(points - 1);
    out.push_back({x, gumbel_width(alpha, x), gumbel_expected_loss(family, alpha, lambda, x)});
  }
  return out;
}

}  // namespace ik::oracle
