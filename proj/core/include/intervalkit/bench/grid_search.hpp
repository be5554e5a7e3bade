#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "intervalkit/bench/record.hpp"
#include "intervalkit/bench/train.hpp"
#include "intervalkit/core/dataset.hpp"

namespace ik::bench {

struct HyperGrid {
  std::vector<double> learning_rates{1e-3};
  std::vector<double> dropouts{0.0};
  /// Only used by methods with a regularization weight; others train once per (lr, dropout).
  std::vector<double> lambdas{0.0};
};

/// Settings shared by every cell of a search.
struct RunOptions {
  TrainConfig base;  // method, alpha, epochs, batch, hidden, patience, margin
  std::vector<std::uint64_t> seeds{0};
  SplitRatios ratios = SplitRatios::width_protocol();
  std::size_t jobs = 1;
};

/// Test-split predictions of one trained model, for sorted-band plots.
struct Band {
  std::vector<double> y;
  std::vector<double> lower;
  std::vector<double> upper;
};

struct CellSummary {
  CellChoice choice;
  double val_picp = 0.0;  // mean over seeds
  double val_mpiw = 0.0;
  bool qualifies = false;
  bool failed = false;
  std::string reason;
};

struct GridSearchResult {
  bool has_winner = false;
  TrainConfig best;
  BenchmarkRecord record;
  std::vector<CellSummary> cells;
  Band band;  // first seed of the winner
};

/// Split/preprocessing seed and training seed for seed index `s`.
std::uint64_t split_seed(std::uint64_t s);
std::uint64_t train_seed(std::uint64_t s);

/// Trains every (cell, seed) pair, picks the cell whose mean validation PICP
/// clears alpha - margin with the smallest mean validation MPIW (else the cell
/// closest to alpha), and reports that cell's test metrics per seed. Cells
/// whose training fails numerically are excluded and their reason recorded;
/// if every cell fails, the record has no winner.
GridSearchResult grid_search(const Dataset& raw, const HyperGrid& grid, const RunOptions& options);

}  // namespace ik::bench
