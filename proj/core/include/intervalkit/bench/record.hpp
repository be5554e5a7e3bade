#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "intervalkit/metrics/metrics.hpp"

namespace ik::bench {

struct MeanSe {
  double mean = 0.0;
  double se = 0.0;  // sample std (n - 1) / sqrt(n); 0 for a single seed

  bool operator==(const MeanSe&) const = default;
};

MeanSe mean_se(const std::vector<double>& values);

/// Winning hyperparameters of a grid search (or the protocol rung used).
struct CellChoice {
  double learning_rate = 0.0;
  double dropout = 0.0;
  double lambda = 0.0;
  std::vector<double> quantiles;  // last seed's pair for quantile-conditioned methods

  bool operator==(const CellChoice&) const = default;
};

struct BenchmarkRecord {
  std::string dataset;
  std::string method;
  double alpha = 0.9;
  double coverage_margin = 0.025;
  std::vector<metrics::EvalReport> per_seed;  // test-split reports
  MeanSe picp, mpiw, wcpc, hsic;
  bool coverage_obtained = false;
  bool has_winner = true;
  std::string note;  // why there is no winner, or which ladder rung was used
  CellChoice choice;

  /// Recomputes the aggregates and the coverage flag from per_seed.
  void aggregate();

  bool operator==(const BenchmarkRecord&) const = default;
};

/// |mean PICP - alpha| <= margin + one standard error across seeds.
bool coverage_rule(const MeanSe& picp, double alpha, double margin);

}  // namespace ik::bench
