#pragma once

#include <vector>

#include "intervalkit/bench/grid_search.hpp"

namespace ik::bench {

/// Default ladder of correlation weights, strongest first.
std::vector<double> default_orthogonality_ladder();

struct RungOutcome {
  double gamma = 0.0;
  MeanSe test_picp;
  bool coverage_obtained = false;
};

struct ProtocolResult {
  BenchmarkRecord record;  // the rung that was kept
  std::vector<RungOutcome> rungs;
  Band band;
};

/// Walks the ladder from the largest weight down, training RQR-O with the
/// fixed learning rate and dropout of `options.base` on every seed, and keeps
/// the first rung whose mean test PICP satisfies coverage_rule. When no rung
/// does, the last one is reported with coverage_obtained = false. The ladder
/// must be non-empty, nonnegative and strictly decreasing.
ProtocolResult rqr_o_protocol(const Dataset& raw, const std::vector<double>& ladder,
                              const RunOptions& options);

}  // namespace ik::bench
