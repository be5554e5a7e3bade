#include "intervalkit/data/csv.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>
#include <string_view>
#include <vector>

#include "intervalkit/core/errors.hpp"

namespace ik::data {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    out.push_back(trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

double parse_cell(std::string_view cell, std::size_t row, std::size_t col) {
  if (!cell.empty() && cell.front() == '+') cell.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
  if (cell.empty() || ec != std::errc{} || ptr != cell.data() + cell.size()) {
    throw ParseError("row " + std::to_string(row) + ", column " + std::to_string(col) +
                         ": '" + std::string(cell) + "' is not a number",
                     row, col);
  }
  return v;
}

}  // namespace

Dataset parse_csv(std::istream& in, const std::string& target_column, const std::string& name) {
  std::string line;
  std::size_t row = 0;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    ++row;
    if (!trim(line).empty()) break;
  }
  if (trim(line).empty()) throw ParseError("CSV input has no header row", 0, 0);
  for (auto f : split_fields(line)) header.emplace_back(f);

  std::size_t target = header.size() - 1;
  if (!target_column.empty()) {
    target = header.size();
    for (std::size_t j = 0; j < header.size(); ++j)
      if (header[j] == target_column) target = j;
    if (target == header.size())
      throw ConfigError("target column '" + target_column + "' not found in " + name);
  }
  if (header.size() < 2) throw ConfigError("CSV needs at least one feature and one target column");

  std::vector<double> features;
  std::vector<double> targets;
  const std::size_t d = header.size() - 1;
  while (std::getline(in, line)) {
    ++row;
    if (trim(line).empty()) continue;
    const auto fields = split_fields(line);
    if (fields.size() != header.size()) {
      throw ParseError("row " + std::to_string(row) + " has " + std::to_string(fields.size()) +
                           " fields, header has " + std::to_string(header.size()),
                       row, std::min(fields.size(), header.size()) + 1);
    }
    for (std::size_t j = 0; j < fields.size(); ++j) {
      const double v = parse_cell(fields[j], row, j + 1);
      if (j == target)
        targets.push_back(v);
      else
        features.push_back(v);
    }
  }

  Dataset ds;
  ds.name = name;
  ds.features = Matrix(targets.size(), d);
  std::copy(features.begin(), features.end(), ds.features.values().begin());
  ds.targets = std::move(targets);
  return ds;
}

Dataset load_csv(const std::filesystem::path& path, const std::string& target_column) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open CSV file " + path.string());
  return parse_csv(in, target_column, path.stem().string());
}

void save_csv(const Dataset& dataset, const std::filesystem::path& path) {
  dataset.validate();
  std::ofstream out(path);
  if (!out) throw IoError("cannot write CSV file " + path.string());
  for (std::size_t j = 0; j < dataset.feature_count(); ++j) out << 'x' << j << ',';
  out << "y\n";
  char buf[64];
  auto put = [&](double v) {
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    out.write(buf, res.ptr - buf);
  };
  for (std::size_t r = 0; r < dataset.size(); ++r) {
    for (double v : dataset.features.row(r)) {
      put(v);
      out << ',';
    }
    put(dataset.targets[r]);
    out << '\n';
  }
  if (!out) throw IoError("failed while writing " + path.string());
}

}  // namespace ik::data
