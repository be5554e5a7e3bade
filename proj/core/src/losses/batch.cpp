#include <algorithm>
#include <cmath>
#include <string>

#include "intervalkit/core/errors.hpp"
#include "intervalkit/losses/losses.hpp"

namespace ik::losses {

namespace {

void require_same_length(std::size_t a, std::size_t b, const char* who) {
  if (a != b)
    throw StructuralError(std::string(who) + ": bounds and targets differ in length (" +
                          std::to_string(a) + " vs " + std::to_string(b) + ")");
}

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

struct PearsonParts {
  double r = 0.0;
  double w_mean = 0.0;
  double m_mean = 0.0;
  double sww = 0.0;
  double smm = 0.0;
  bool degenerate = false;
};

PearsonParts pearson_parts(std::span<const double> w, std::span<const double> m) {
  PearsonParts p;
  const double n = static_cast<double>(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) {
    p.w_mean += w[i];
    p.m_mean += m[i];
  }
  p.w_mean /= n;
  p.m_mean /= n;
  double swm = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    const double dw = w[i] - p.w_mean;
    const double dm = m[i] - p.m_mean;
    p.sww += dw * dw;
    p.smm += dm * dm;
    swm += dw * dm;
  }
  if (!(p.sww > 0.0) || !(p.smm > 0.0)) {
    p.degenerate = true;
    return p;
  }
  p.r = std::clamp(swm / std::sqrt(p.sww * p.smm), -1.0, 1.0);
  return p;
}

// Batch-mean relaxed loss at `alpha`; gradients accumulate the 1/n factor.
double mean_rqr(std::span<const Bounds> bounds, std::span<const double> y, double alpha,
                std::vector<BoundGradient>* grads) {
  const double inv_n = 1.0 / static_cast<double>(bounds.size());
  double total = 0.0;
  for (std::size_t i = 0; i < bounds.size(); ++i) {
    total += rqr_loss(bounds[i], y[i], alpha);
    if (grads) {
      const BoundGradient g = rqr_gradient(bounds[i], y[i], alpha);
      (*grads)[i].d_mu1 += g.d_mu1 * inv_n;
      (*grads)[i].d_mu2 += g.d_mu2 * inv_n;
    }
  }
  return total * inv_n;
}

struct IrParts {
  double value = 0.0;
  std::vector<BoundGradient> gradients;
};

IrParts ir_parts(std::span<const Bounds> bounds, std::span<const double> y, double alpha,
                 double lambda, IrOptions opt, bool want_gradients) {
  const std::size_t n = bounds.size();
  const double nd = static_cast<double>(n);
  IrParts out;
  if (want_gradients) out.gradients.assign(n, {});

  std::size_t c = 0;
  double captured = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (bounds[i].mu1 <= y[i] && y[i] <= bounds[i].mu2) {
      ++c;
      captured += bounds[i].mu2 - bounds[i].mu1;
    }
  }
  if (c > 0) {
    out.value = captured / static_cast<double>(c);
    if (want_gradients) {
      const double inv_c = 1.0 / static_cast<double>(c);
      for (std::size_t i = 0; i < n; ++i) {
        if (bounds[i].mu1 <= y[i] && y[i] <= bounds[i].mu2) {
          out.gradients[i].d_mu1 -= inv_c;
          out.gradients[i].d_mu2 += inv_c;
        }
      }
    }
  }

  // Coverage count used by the deficit term: the hard count, or a product of
  // sigmoids when a sharpness is configured.
  const double s = opt.soft_sharpness;
  double count = static_cast<double>(c);
  std::vector<BoundGradient> dcount;
  if (s > 0.0) {
    count = 0.0;
    if (want_gradients) dcount.assign(n, {});
    for (std::size_t i = 0; i < n; ++i) {
      const double a = sigmoid(s * (y[i] - bounds[i].mu1));
      const double b = sigmoid(s * (bounds[i].mu2 - y[i]));
      count += a * b;
      if (want_gradients) {
        dcount[i].d_mu1 = -s * a * (1.0 - a) * b;
        dcount[i].d_mu2 = s * b * (1.0 - b) * a;
      }
    }
  }

  const double deficit = alpha - count / nd;
  if (deficit > 0.0 && lambda > 0.0) {
    const double scale = lambda * nd / (alpha * (1.0 - alpha));
    out.value += scale * (opt.squared_deficit ? deficit * deficit : deficit);
    if (want_gradients && s > 0.0) {
      // d(deficit)/d(count) = -1/n
      const double dvalue_dcount =
          -scale / nd * (opt.squared_deficit ? 2.0 * deficit : 1.0);
      for (std::size_t i = 0; i < n; ++i) {
        out.gradients[i].d_mu1 += dvalue_dcount * dcount[i].d_mu1;
        out.gradients[i].d_mu2 += dvalue_dcount * dcount[i].d_mu2;
      }
    }
  }
  return out;
}

}  // namespace

BatchCoverageStats raw_coverage(std::span<const Bounds> bounds, std::span<const double> y) {
  require_same_length(bounds.size(), y.size(), "raw_coverage");
  BatchCoverageStats s{bounds.size(), 0};
  for (std::size_t i = 0; i < bounds.size(); ++i)
    if (bounds[i].mu1 <= y[i] && y[i] <= bounds[i].mu2) ++s.c;
  return s;
}

WidthCoverageVectors width_coverage(std::span<const Bounds> bounds, std::span<const double> y) {
  require_same_length(bounds.size(), y.size(), "width_coverage");
  WidthCoverageVectors v;
  v.w.resize(bounds.size());
  v.m.resize(bounds.size());
  for (std::size_t i = 0; i < bounds.size(); ++i) {
    const double lo = std::min(bounds[i].mu1, bounds[i].mu2);
    const double hi = std::max(bounds[i].mu1, bounds[i].mu2);
    v.w[i] = hi - lo;
    v.m[i] = (lo <= y[i] && y[i] <= hi) ? 1.0 : 0.0;
  }
  return v;
}

PenaltyValue orthogonality_penalty(std::span<const double> w, std::span<const double> m) {
  if (w.size() != m.size()) throw StructuralError("orthogonality_penalty: w and m differ in length");
  if (w.size() < 2) throw ConfigError("orthogonality_penalty needs at least 2 examples");
  const PearsonParts p = pearson_parts(w, m);
  return {std::abs(p.r), p.degenerate, p.r};
}

BatchLoss rqr_o_loss(std::span<const Bounds> bounds, std::span<const double> y, double alpha,
                     double gamma) {
  require_same_length(bounds.size(), y.size(), "rqr_o_loss");
  if (bounds.size() < 2) throw ConfigError("rqr_o_loss needs a batch of at least 2");
  BatchLoss out;
  out.value = mean_rqr(bounds, y, alpha, nullptr);
  if (gamma != 0.0) {
    const WidthCoverageVectors v = width_coverage(bounds, y);
    const PenaltyValue pen = orthogonality_penalty(v.w, v.m);
    out.value += gamma * pen.value;
    out.degenerate = pen.degenerate;
  }
  return out;
}

double ir_loss(std::span<const Bounds> bounds, std::span<const double> y, double alpha,
               double lambda, IrOptions options) {
  require_same_length(bounds.size(), y.size(), "ir_loss");
  if (bounds.empty()) throw ConfigError("ir_loss needs a nonempty batch");
  return ir_parts(bounds, y, alpha, lambda, options, false).value;
}

BatchEvaluation evaluate_batch(const LossConfig& config, std::span<const Bounds> bounds,
                               std::span<const double> y) {
  require_same_length(bounds.size(), y.size(), "evaluate_batch");
  if (bounds.empty()) throw ConfigError("evaluate_batch needs a nonempty batch");
  const std::size_t n = bounds.size();
  BatchEvaluation out;
  out.gradients.assign(n, {});

  switch (config.family) {
    case LossFamily::RQR_O: {
      out.loss = mean_rqr(bounds, y, config.alpha, &out.gradients);
      if (config.lambda == 0.0 || n < 2) return out;
      const WidthCoverageVectors v = width_coverage(bounds, y);
      const PearsonParts p = pearson_parts(v.w, v.m);
      out.degenerate = p.degenerate;
      if (p.degenerate) return out;
      out.loss += config.lambda * std::abs(p.r);
      // Only the widths carry gradient; the coverage indicators are piecewise constant.
      const double sign_r = p.r >= 0.0 ? 1.0 : -1.0;
      const double denom = std::sqrt(p.sww * p.smm);
      for (std::size_t i = 0; i < n; ++i) {
        const double dr_dw = (v.m[i] - p.m_mean) / denom - p.r * (v.w[i] - p.w_mean) / p.sww;
        const double dpen_dw = config.lambda * sign_r * dr_dw;
        const double dir = bounds[i].mu2 >= bounds[i].mu1 ? 1.0 : -1.0;
        out.gradients[i].d_mu1 -= dir * dpen_dw;
        out.gradients[i].d_mu2 += dir * dpen_dw;
      }
      return out;
    }
    case LossFamily::IR: {
      IrParts parts = ir_parts(bounds, y, config.alpha, config.lambda,
                               {config.ir_squared_deficit, config.ir_soft_sharpness}, true);
      out.loss = parts.value;
      out.gradients = std::move(parts.gradients);
      return out;
    }
    case LossFamily::SQR_PINBALL:
      throw UsageError("SQR_PINBALL batches go through evaluate_quantile_batch");
    default:
      break;
  }

  const double inv_n = 1.0 / static_cast<double>(n);
  double total = 0.0;
  // One loop per family keeps the dispatch and parameter checks out of the
  // per-example work.
  auto accumulate = [&](auto loss, auto grad) {
    for (std::size_t i = 0; i < n; ++i) {
      total += loss(bounds[i], y[i]);
      const BoundGradient g = grad(bounds[i], y[i]);
      out.gradients[i] = {g.d_mu1 * inv_n, g.d_mu2 * inv_n};
    }
  };
  switch (config.family) {
    case LossFamily::RQR: {
      const double a = config.alpha;
      accumulate([a](Bounds b, double t) { return rqr_loss(b, t, a); },
                 [a](Bounds b, double t) { return rqr_gradient(b, t, a); });
      break;
    }
    case LossFamily::RQR_W: {
      const double a = config.coverage_target().alpha_hat;
      const double l = config.lambda;
      accumulate([a, l](Bounds b, double t) { return rqr_w_loss(b, t, a, l); },
                 [a, l](Bounds b, double t) { return rqr_w_gradient(b, t, a, l); });
      break;
    }
    case LossFamily::QR_PINBALL: {
      const double lo = (1.0 - config.alpha) / 2.0;
      if (!(lo > 0.0 && lo < 0.5)) throw ConfigError("quantile level must lie in (0, 1)");
      const double hi = 1.0 - lo;
      accumulate(
          [lo, hi](Bounds b, double t) {
            const double r1 = t - b.mu1, r2 = t - b.mu2;
            return (r1 >= 0.0 ? lo * r1 : (lo - 1.0) * r1) + (r2 >= 0.0 ? hi * r2 : (hi - 1.0) * r2);
          },
          [lo, hi](Bounds b, double t) {
            return BoundGradient{t >= b.mu1 ? -lo : 1.0 - lo, t >= b.mu2 ? -hi : 1.0 - hi};
          });
      break;
    }
    default:
      accumulate([&](Bounds b, double t) { return pointwise_loss(config, b, t); },
                 [&](Bounds b, double t) { return pointwise_gradient(config, b, t); });
  }
  out.loss = total * inv_n;
  return out;
}

BatchEvaluation evaluate_quantile_batch(std::span<const double> mu, std::span<const double> y,
                                        std::span<const double> quantiles) {
  require_same_length(mu.size(), y.size(), "evaluate_quantile_batch");
  if (quantiles.size() != mu.size())
    throw StructuralError("evaluate_quantile_batch: one quantile level per example is required");
  if (mu.empty()) throw ConfigError("evaluate_quantile_batch needs a nonempty batch");
  const double inv_n = 1.0 / static_cast<double>(mu.size());
  BatchEvaluation out;
  out.gradients.assign(mu.size(), {});
  double total = 0.0;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    total += pinball(mu[i], y[i], quantiles[i]);
    out.gradients[i].d_mu1 = pinball_gradient(mu[i], y[i], quantiles[i]) * inv_n;
  }
  out.loss = total * inv_n;
  return out;
}

}  // namespace ik::losses
