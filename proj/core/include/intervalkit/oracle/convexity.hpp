#pragma once

#include <cstddef>

namespace ik::oracle {

struct ConvexityProbe {
  double alpha = 0.0;
  double lambda = 0.0;
  double domain_lo = 0.0;
  double domain_hi = 0.0;
  /// max(0, P(domain) - alpha), the stated sufficient penalty weight.
  double threshold = 0.0;

  /// Minimum over the grid (mu1 <= mu2 in the domain) of the eigenvalue expression
  /// lambda_- = (mu2 - mu1) + lambda - |alpha - P(mu1, mu2) - lambda|.
  double min_lambda_minus = 0.0;
  double argmin_mu1 = 0.0;
  double argmin_mu2 = 0.0;
  /// The same minimum restricted to grid points where alpha - P - lambda <= 0.
  double min_lambda_minus_resolved = 0.0;
  std::size_t resolved_points = 0;
  std::size_t grid_points = 0;
  std::size_t negative_points = 0;

  /// Smallest eigenvalue of the full expected-loss Hessian, which carries the
  /// density at each bound on the diagonal: [[w p(mu1) + lambda, alpha - P - lambda], [., w p(mu2) + lambda]].
  double min_true_eigenvalue = 0.0;
};

/// Standard Gaussian target on [domain_lo, domain_hi], an steps x steps grid.
ConvexityProbe convexity_probe(double alpha, double lambda, double domain_lo, double domain_hi,
                               std::size_t steps = 201);

}  // namespace ik::oracle
