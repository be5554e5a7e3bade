#include "intervalkit/data/preprocess.hpp"

#include <cmath>

#include "intervalkit/core/errors.hpp"

namespace ik::data {

Preprocessing fit_preprocessing(const Dataset& dataset, std::span<const std::size_t> rows) {
  dataset.validate();
  if (rows.empty()) throw ConfigError("cannot fit preprocessing on zero rows");
  const std::size_t d = dataset.feature_count();
  const double n = static_cast<double>(rows.size());
  Preprocessing p;
  p.fitted = true;
  p.feature_mean.assign(d, 0.0);
  p.feature_std.assign(d, 0.0);
  double target_sum = 0.0;
  for (std::size_t r : rows) {
    for (std::size_t j = 0; j < d; ++j) p.feature_mean[j] += dataset.features(r, j);
    target_sum += dataset.targets[r];
  }
  for (double& m : p.feature_mean) m /= n;
  for (std::size_t r : rows)
    for (std::size_t j = 0; j < d; ++j) {
      const double dev = dataset.features(r, j) - p.feature_mean[j];
      p.feature_std[j] += dev * dev;
    }
  for (double& s : p.feature_std) {
    s = std::sqrt(s / n);
    if (!(s > 1e-12)) s = 1.0;
  }
  const double target_mean = target_sum / n;
  if (std::abs(target_mean) > 1e-12) {
    p.target_scale = target_mean;
    p.target_scaled = true;
  }
  return p;
}

Dataset apply_preprocessing(const Dataset& dataset, const Preprocessing& prep) {
  dataset.validate();
  if (prep.feature_mean.size() != dataset.feature_count())
    throw StructuralError("preprocessing was fitted on a different feature count");
  Dataset out = dataset;
  for (std::size_t r = 0; r < out.size(); ++r) {
    auto row = out.features.row(r);
    for (std::size_t j = 0; j < row.size(); ++j)
      row[j] = (row[j] - prep.feature_mean[j]) / prep.feature_std[j];
    out.targets[r] = prep.apply_target(out.targets[r]);
  }
  out.preprocessing = prep;
  return out;
}

std::pair<Dataset, Split> preprocess_and_split(const Dataset& dataset, SplitRatios ratios,
                                               std::uint64_t seed) {
  dataset.validate();
  Split split = make_split(dataset.size(), ratios, seed);
  const Preprocessing prep = fit_preprocessing(dataset, split.train);
  return {apply_preprocessing(dataset, prep), std::move(split)};
}

}  // namespace ik::data
