#include "intervalkit/core/dataset.hpp"

#include <cmath>

#include "intervalkit/core/errors.hpp"
#include "intervalkit/core/rng.hpp"

namespace ik {

void Dataset::validate() const {
  if (features.rows() != targets.size()) {
    throw StructuralError("dataset '" + name + "': " + std::to_string(features.rows()) +
                          " feature rows but " + std::to_string(targets.size()) + " targets");
  }
}

Dataset Dataset::subset(std::span<const std::size_t> indices) const {
  Dataset out;
  out.name = name;
  out.preprocessing = preprocessing;
  out.features = Matrix(indices.size(), features.cols());
  out.targets.reserve(indices.size());
  for (std::size_t r = 0; r < indices.size(); ++r) {
    const std::size_t src = indices[r];
    if (src >= size()) throw StructuralError("subset index out of range");
    auto from = features.row(src);
    auto to = out.features.row(r);
    std::copy(from.begin(), from.end(), to.begin());
    out.targets.push_back(targets[src]);
  }
  return out;
}

Split make_split(std::size_t n, SplitRatios ratios, std::uint64_t seed) {
  const double total = ratios.train + ratios.val + ratios.test;
  if (ratios.train <= 0.0 || ratios.val < 0.0 || ratios.test < 0.0 ||
      std::abs(total - 1.0) > 1e-9) {
    throw ConfigError("split ratios must be nonnegative and sum to 1");
  }
  const auto n_train = static_cast<std::size_t>(std::llround(ratios.train * static_cast<double>(n)));
  const auto n_val = static_cast<std::size_t>(std::llround(ratios.val * static_cast<double>(n)));
  if (n_train + n_val > n) throw ConfigError("split ratios leave no room for the test slice");
  const std::size_t n_test = n - n_train - n_val;
  if (n_train == 0 || (ratios.val > 0.0 && n_val == 0) || (ratios.test > 0.0 && n_test == 0)) {
    throw ConfigError("split of " + std::to_string(n) + " rows leaves an empty slice");
  }

  Rng rng(seed);
  const auto order = rng.permutation(n);
  Split split;
  split.seed = seed;
  split.train.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_train));
  split.val.assign(order.begin() + static_cast<std::ptrdiff_t>(n_train),
                   order.begin() + static_cast<std::ptrdiff_t>(n_train + n_val));
  split.test.assign(order.begin() + static_cast<std::ptrdiff_t>(n_train + n_val), order.end());
  return split;
}

}  // namespace ik
