#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "intervalkit/core/interval.hpp"

namespace ik::losses {

enum class LossFamily { RQR, RQR_W, RQR_O, QR_PINBALL, SQR_PINBALL, WINKLER, IR };

std::string_view to_string(LossFamily family);
/// Throws ConfigError for unknown names.
LossFamily parse_family(std::string_view name);

struct LossConfig {
  LossFamily family = LossFamily::RQR;
  double alpha = 0.9;     // target coverage
  double lambda = 0.0;    // width penalty (RQR_W), correlation weight (RQR_O), deficit weight (IR)
  double quantile = 0.5;  // single-quantile pinball level
  bool ir_squared_deficit = false;
  /// Sigmoid sharpness for a differentiable coverage count in the IR deficit
  /// term. 0 keeps the hard indicator, whose gradient is zero almost everywhere.
  double ir_soft_sharpness = 0.0;

  /// Target handed to the pointwise loss: alpha + 2*lambda for RQR_W, alpha otherwise.
  CoverageTarget coverage_target() const;
  /// Throws ConfigError on out-of-range parameters.
  void validate() const;
};

struct BoundGradient {
  double d_mu1 = 0.0;
  double d_mu2 = 0.0;
};

// ---------------------------------------------------------------------------
// Pointwise losses. Bounds are raw model outputs unless stated otherwise.

/// q*(y-mu) when y >= mu, (q-1)*(y-mu) otherwise. Throws ConfigError unless q in (0,1).
double pinball(double mu, double y, double q);
double pinball_gradient(double mu, double y, double q);

/// Pinball pair at quantiles (1-alpha)/2 on mu1 and 1-(1-alpha)/2 on mu2.
double qr_loss(Bounds b, double y, double alpha);
BoundGradient qr_gradient(Bounds b, double y, double alpha);

/// Interval score at miscoverage a; requires mu1 <= mu2.
double winkler_score(Bounds b, double y, double miscoverage);
BoundGradient winkler_gradient(Bounds b, double y, double miscoverage);

/// alpha*k for k >= 0, (alpha-1)*k otherwise, k = (y-mu1)(y-mu2).
/// Symmetric in mu1 and mu2.
double rqr_loss(Bounds b, double y, double alpha);
/// At a kink (y equal to a bound) the k >= 0 branch is used.
BoundGradient rqr_gradient(Bounds b, double y, double alpha);

/// rqr_loss at alpha_hat plus lambda*(mu2-mu1)^2/2.
double rqr_w_loss(Bounds b, double y, double alpha_hat, double lambda);
BoundGradient rqr_w_gradient(Bounds b, double y, double alpha_hat, double lambda);

// ---------------------------------------------------------------------------
// Batch statistics.

struct BatchCoverageStats {
  std::size_t n = 0;
  std::size_t c = 0;  // covered count, closed interval
};

/// Coverage counted on raw bounds with mu1 as the lower head (empty when mu1 > mu2).
BatchCoverageStats raw_coverage(std::span<const Bounds> bounds, std::span<const double> y);

struct WidthCoverageVectors {
  std::vector<double> w;  // |mu2 - mu1|
  std::vector<double> m;  // 1 when min <= y <= max
};

WidthCoverageVectors width_coverage(std::span<const Bounds> bounds, std::span<const double> y);

struct PenaltyValue {
  double value = 0.0;
  bool degenerate = false;  // zero variance in w or m
  double signed_correlation = 0.0;
};

/// Absolute Pearson correlation between w and m. Requires N >= 2.
PenaltyValue orthogonality_penalty(std::span<const double> w, std::span<const double> m);

struct BatchLoss {
  double value = 0.0;
  bool degenerate = false;
};

/// Mean rqr_loss plus gamma * orthogonality_penalty on the batch.
BatchLoss rqr_o_loss(std::span<const Bounds> bounds, std::span<const double> y, double alpha,
                     double gamma);

struct IrOptions {
  bool squared_deficit = false;
  double soft_sharpness = 0.0;
};

/// Captured-width term (n/c)*width*I averaged over the batch (0 when c = 0)
/// plus lambda * n/(alpha(1-alpha)) * max(0, alpha - c/n).
double ir_loss(std::span<const Bounds> bounds, std::span<const double> y, double alpha,
               double lambda, IrOptions options = {});

// ---------------------------------------------------------------------------
// Batch evaluation used by training: the batch-mean objective and its
// gradient with respect to each example's two raw outputs.

struct BatchEvaluation {
  double loss = 0.0;
  std::vector<BoundGradient> gradients;
  bool degenerate = false;
};

/// Two-output families (everything except SQR_PINBALL).
BatchEvaluation evaluate_batch(const LossConfig& config, std::span<const Bounds> bounds,
                               std::span<const double> y);

/// Single-output pinball with a per-example quantile level; gradients land in d_mu1.
BatchEvaluation evaluate_quantile_batch(std::span<const double> mu, std::span<const double> y,
                                        std::span<const double> quantiles);

/// Convenience for pointwise families on one example.
double pointwise_loss(const LossConfig& config, Bounds b, double y);
BoundGradient pointwise_gradient(const LossConfig& config, Bounds b, double y);

}  // namespace ik::losses
