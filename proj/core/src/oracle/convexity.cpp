#include "intervalkit/oracle/convexity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "intervalkit/core/errors.hpp"
#include "intervalkit/core/normal.hpp"

namespace ik::oracle {

ConvexityProbe convexity_probe(double alpha, double lambda, double domain_lo, double domain_hi,
                               std::size_t steps) {
  if (!(domain_lo < domain_hi)) throw ConfigError("convexity probe: empty domain");
  if (steps < 2) throw ConfigError("convexity probe needs at least 2 grid steps");
  ConvexityProbe r;
  r.alpha = alpha;
  r.lambda = lambda;
  r.domain_lo = domain_lo;
  r.domain_hi = domain_hi;
  r.threshold = std::max(0.0, normal_cdf(domain_hi) - normal_cdf(domain_lo) - alpha);
  r.min_lambda_minus = std::numeric_limits<double>::infinity();
  r.min_lambda_minus_resolved = std::numeric_limits<double>::infinity();
  r.min_true_eigenvalue = std::numeric_limits<double>::infinity();

  const double h = (domain_hi - domain_lo) / static_cast<double>(steps - 1);
  for (std::size_t a = 0; a < steps; ++a) {
    const double u = domain_lo + h * static_cast<double>(a);
    for (std::size_t b = a; b < steps; ++b) {
      const double v = domain_lo + h * static_cast<double>(b);
      const double w = v - u;
      const double p = normal_cdf(v) - normal_cdf(u);
      const double off = alpha - p - lambda;
      const double lm = w + lambda - std::abs(off);
      ++r.grid_points;
      if (lm < 0.0) ++r.negative_points;
      if (lm < r.min_lambda_minus) {
        r.min_lambda_minus = lm;
        r.argmin_mu1 = u;
        r.argmin_mu2 = v;
      }
      if (off <= 0.0) {
        ++r.resolved_points;
        r.min_lambda_minus_resolved = std::min(r.min_lambda_minus_resolved, lm);
      }
      const double h11 = w * normal_pdf(u) + lambda;
      const double h22 = w * normal_pdf(v) + lambda;
      const double mid = 0.5 * (h11 + h22);
      const double rad = std::sqrt(0.25 * (h11 - h22) * (h11 - h22) + off * off);
      r.min_true_eigenvalue = std::min(r.min_true_eigenvalue, mid - rad);
    }
  }
  return r;
}

}  // namespace ik::oracle
