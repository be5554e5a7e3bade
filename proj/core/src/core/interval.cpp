#include "intervalkit/core/interval.hpp"

#include <algorithm>
#include <string>

#include "intervalkit/core/errors.hpp"

namespace ik {

IntervalBatch IntervalBatch::canonicalize(std::span<const double> raw_lower,
                                          std::span<const double> raw_upper) {
  if (raw_lower.size() != raw_upper.size()) {
    throw StructuralError("canonicalize: bound vectors differ in length (" +
                          std::to_string(raw_lower.size()) + " vs " +
                          std::to_string(raw_upper.size()) + ")");
  }
  IntervalBatch batch;
  batch.lower_.resize(raw_lower.size());
  batch.upper_.resize(raw_lower.size());
  for (std::size_t i = 0; i < raw_lower.size(); ++i) {
    batch.lower_[i] = std::min(raw_lower[i], raw_upper[i]);
    batch.upper_[i] = std::max(raw_lower[i], raw_upper[i]);
  }
  return batch;
}

CoverageTarget CoverageTarget::plain(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigError("alpha must lie in (0, 1)");
  return {alpha, alpha, false};
}

CoverageTarget CoverageTarget::width_corrected(double alpha, double lambda) {
  CoverageTarget t = plain(alpha);
  if (!(lambda >= 0.0)) throw ConfigError("lambda must be nonnegative");
  t.alpha_hat = alpha + 2.0 * lambda;
  t.above_one = t.alpha_hat > 1.0;
  return t;
}

}  // namespace ik
