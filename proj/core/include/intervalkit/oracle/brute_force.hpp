#pragma once

#include <cstddef>
#include <span>

#include "intervalkit/losses/losses.hpp"

namespace ik::oracle {

struct GridSpec {
  double min = 0.0;
  double max = 1.0;
  std::size_t steps = 400;
};

/// Square grid over [min - m, max + m] of the samples, m = margin_fraction * range.
GridSpec default_grid(std::span<const double> samples, std::size_t steps = 400,
                      double margin_fraction = 0.1);

struct OracleResult {
  double mu1 = 0.0;  // canonicalized: mu1 <= mu2
  double mu2 = 0.0;
  double loss_value = 0.0;  // mean loss over the samples at (mu1, mu2)
  double empirical_coverage = 0.0;
  double grid_resolution = 0.0;
  std::size_t covered = 0;
  std::size_t n = 0;
  /// Closed-interval counts over every cell that attains the minimum within
  /// relative 1e-12; they differ when the minimum sits on a cell boundary.
  std::size_t tied_count_min = 0;
  std::size_t tied_count_max = 0;
};

/// Minimizes the summed loss over (mu1, mu2).
///
/// Exhaustive evaluation on a steps x steps grid, coordinate-wise golden
/// refinement to 1e-4, then (for the relaxed families) an exact polish: between
/// consecutive sample values the relaxed objective is a quadratic in
/// (mu1, mu2), so each nearby closed cell is minimized in closed form. When
/// several cells share the minimum the one whose coverage count is
/// round(alpha N) is reported, and the point is moved into that cell's
/// interior by at most half the resolution.
/// Throws ConfigError when the grid does not cover the samples or the family
/// needs batch statistics.
OracleResult brute_force_minimize(const losses::LossConfig& loss, std::span<const double> samples,
                                  GridSpec grid);

/// The exact cell-by-cell minimization alone, over every cell of the default
/// grid's range. O(N^2); RQR and RQR_W only.
OracleResult exact_pair_search(const losses::LossConfig& loss, std::span<const double> samples,
                               double resolution = 1e-4);

}  // namespace ik::oracle
