#pragma once

#include <filesystem>
#include <istream>
#include <string>

#include "intervalkit/core/dataset.hpp"

namespace ik::data {

/// Reads a numeric CSV with one header row. The target is the named column,
/// or the last column when `target_column` is empty. Throws IoError when the
/// file cannot be opened, ParseError (1-based row/column, header is row 1) on
/// a malformed cell or ragged row, and ConfigError when the target is absent.
Dataset load_csv(const std::filesystem::path& path, const std::string& target_column = {});
Dataset parse_csv(std::istream& in, const std::string& target_column = {},
                  const std::string& name = "csv");

/// Writes features as x0..x{d-1} followed by `y`, with round-trip precision.
void save_csv(const Dataset& dataset, const std::filesystem::path& path);

}  // namespace ik::data
