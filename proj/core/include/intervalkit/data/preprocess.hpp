#pragma once

#include <cstdint>
#include <span>
#include <utility>

#include "intervalkit/core/dataset.hpp"

namespace ik::data {

/// Feature means/stds (population) and target mean over `rows`.
Preprocessing fit_preprocessing(const Dataset& dataset, std::span<const std::size_t> rows);

/// Applies `prep` to every row and records it on the result.
Dataset apply_preprocessing(const Dataset& dataset, const Preprocessing& prep);

/// Splits, fits on the training rows, transforms everything.
std::pair<Dataset, Split> preprocess_and_split(const Dataset& dataset, SplitRatios ratios,
                                               std::uint64_t seed);

}  // namespace ik::data
