#include "intervalkit/losses/losses.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <string>
#include <utility>

#include "intervalkit/core/errors.hpp"

namespace ik::losses {

namespace {

constexpr std::array<std::pair<LossFamily, std::string_view>, 7> kNames{{
    {LossFamily::RQR, "RQR"},
    {LossFamily::RQR_W, "RQR_W"},
    {LossFamily::RQR_O, "RQR_O"},
    {LossFamily::QR_PINBALL, "QR_PINBALL"},
    {LossFamily::SQR_PINBALL, "SQR_PINBALL"},
    {LossFamily::WINKLER, "WINKLER"},
    {LossFamily::IR, "IR"},
}};

void require_quantile(double q) {
  if (!(q > 0.0 && q < 1.0)) throw ConfigError("quantile level must lie in (0, 1)");
}

// Sign factor of the relaxed loss: alpha - I[y strictly inside]. The kink
// kappa == 0 falls on the alpha branch.
double rqr_slope(double kappa, double alpha) { return kappa >= 0.0 ? alpha : alpha - 1.0; }

}  // namespace

std::string_view to_string(LossFamily family) {
  for (const auto& [f, name] : kNames)
    if (f == family) return name;
  return "UNKNOWN";
}

LossFamily parse_family(std::string_view name) {
  std::string key(name);
  for (char& ch : key) {
    ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
    if (ch == '-') ch = '_';
  }
  for (const auto& [f, n] : kNames)
    if (n == key) return f;
  throw ConfigError("unknown loss family '" + std::string(name) + "'");
}

CoverageTarget LossConfig::coverage_target() const {
  if (family == LossFamily::RQR_W) return CoverageTarget::width_corrected(alpha, lambda);
  return CoverageTarget::plain(alpha);
}

void LossConfig::validate() const {
  if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigError("alpha must lie in (0, 1)");
  if (!(lambda >= 0.0) || !std::isfinite(lambda))
    throw ConfigError("lambda must be a finite nonnegative value");
  if (family == LossFamily::SQR_PINBALL) require_quantile(quantile);
  if (!(ir_soft_sharpness >= 0.0) || !std::isfinite(ir_soft_sharpness))
    throw ConfigError("ir_soft_sharpness must be a finite nonnegative value");
}

double pinball(double mu, double y, double q) {
  require_quantile(q);
  const double r = y - mu;
  return r >= 0.0 ? q * r : (q - 1.0) * r;
}

double pinball_gradient(double mu, double y, double q) {
  require_quantile(q);
  return y >= mu ? -q : 1.0 - q;
}

double qr_loss(Bounds b, double y, double alpha) {
  const double lo = (1.0 - alpha) / 2.0;
  return pinball(b.mu1, y, lo) + pinball(b.mu2, y, 1.0 - lo);
}

BoundGradient qr_gradient(Bounds b, double y, double alpha) {
  const double lo = (1.0 - alpha) / 2.0;
  return {pinball_gradient(b.mu1, y, lo), pinball_gradient(b.mu2, y, 1.0 - lo)};
}

double winkler_score(Bounds b, double y, double a) {
  if (!(a > 0.0 && a < 1.0)) throw ConfigError("miscoverage must lie in (0, 1)");
  if (b.mu1 > b.mu2) throw DomainError("winkler_score requires mu1 <= mu2");
  double s = b.mu2 - b.mu1;
  if (y <= b.mu1) s += (2.0 / a) * (b.mu1 - y);
  if (y >= b.mu2) s += (2.0 / a) * (y - b.mu2);
  return s;
}

BoundGradient winkler_gradient(Bounds b, double y, double a) {
  if (!(a > 0.0 && a < 1.0)) throw ConfigError("miscoverage must lie in (0, 1)");
  if (b.mu1 > b.mu2) throw DomainError("winkler_gradient requires mu1 <= mu2");
  BoundGradient g{-1.0, 1.0};
  if (y <= b.mu1) g.d_mu1 += 2.0 / a;
  if (y >= b.mu2) g.d_mu2 -= 2.0 / a;
  return g;
}

double rqr_loss(Bounds b, double y, double alpha) {
  const double kappa = (y - b.mu1) * (y - b.mu2);
  return rqr_slope(kappa, alpha) * kappa;
}

BoundGradient rqr_gradient(Bounds b, double y, double alpha) {
  const double c = rqr_slope((y - b.mu1) * (y - b.mu2), alpha);
  return {-(y - b.mu2) * c, -(y - b.mu1) * c};
}

double rqr_w_loss(Bounds b, double y, double alpha_hat, double lambda) {
  const double w = b.mu2 - b.mu1;
  return rqr_loss(b, y, alpha_hat) + 0.5 * lambda * w * w;
}

BoundGradient rqr_w_gradient(Bounds b, double y, double alpha_hat, double lambda) {
  BoundGradient g = rqr_gradient(b, y, alpha_hat);
  const double w = b.mu2 - b.mu1;
  g.d_mu1 -= lambda * w;
  g.d_mu2 += lambda * w;
  return g;
}

double pointwise_loss(const LossConfig& config, Bounds b, double y) {
  switch (config.family) {
    case LossFamily::RQR:
      return rqr_loss(b, y, config.alpha);
    case LossFamily::RQR_W:
      return rqr_w_loss(b, y, config.coverage_target().alpha_hat, config.lambda);
    case LossFamily::QR_PINBALL:
      return qr_loss(b, y, config.alpha);
    case LossFamily::SQR_PINBALL:
      return pinball(b.mu1, y, config.quantile);
    case LossFamily::WINKLER:
      if (b.mu1 > b.mu2) std::swap(b.mu1, b.mu2);
      return winkler_score(b, y, 1.0 - config.alpha);
    case LossFamily::RQR_O:
    case LossFamily::IR:
      break;
  }
  throw UsageError(std::string(to_string(config.family)) + " is a batch-level loss");
}

BoundGradient pointwise_gradient(const LossConfig& config, Bounds b, double y) {
  switch (config.family) {
    case LossFamily::RQR:
      return rqr_gradient(b, y, config.alpha);
    case LossFamily::RQR_W:
      return rqr_w_gradient(b, y, config.coverage_target().alpha_hat, config.lambda);
    case LossFamily::QR_PINBALL:
      return qr_gradient(b, y, config.alpha);
    case LossFamily::SQR_PINBALL:
      return {pinball_gradient(b.mu1, y, config.quantile), 0.0};
    case LossFamily::WINKLER:
      if (b.mu1 > b.mu2) {
        const BoundGradient g = winkler_gradient({b.mu2, b.mu1}, y, 1.0 - config.alpha);
        return {g.d_mu2, g.d_mu1};
      }
      return winkler_gradient(b, y, 1.0 - config.alpha);
    case LossFamily::RQR_O:
    case LossFamily::IR:
      break;
  }
  throw UsageError(std::string(to_string(config.family)) + " is a batch-level loss");
}

}  // namespace ik::losses
