#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

#include "intervalkit/bench/grid_search.hpp"
#include "intervalkit/bench/record.hpp"
#include "intervalkit/losses/losses.hpp"

namespace ik::bench {

/// {"format": "intervalkit-results", "version": 1, "config": ..., "records": [...]}.
/// No timings or timestamps, so identical runs give identical bytes.
std::string results_json(const std::vector<BenchmarkRecord>& records,
                         const std::string& config_json = "{}");
/// Parses a results.json payload; aggregates are recomputed from per_seed.
/// Throws ParseError on malformed text.
std::vector<BenchmarkRecord> records_from_json(const std::string& text);
/// The "config" member of a results.json payload, re-serialized.
std::string config_from_results(const std::string& text);

/// Header plus one row per record.
std::string summary_csv(const std::vector<BenchmarkRecord>& records);
/// One row per record with "width (coverage)" cells, then a dataset x method
/// width table. Widths whose coverage was not obtained are struck through.
std::string summary_markdown(const std::vector<BenchmarkRecord>& records);

/// Gradients of the relaxed losses at fixed bounds as y sweeps a range. The
/// step direction of a bound is the negated gradient.
struct GradientFieldPoint {
  double y = 0.0;
  losses::BoundGradient rqr;
  losses::BoundGradient rqr_w;
};

struct GradientFieldSpec {
  double mu1 = 0.0;
  double mu2 = 1.0;
  double alpha = 0.9;
  double lambda = 0.1;  // RQR-W at alpha + 2 * lambda
  double y_lo = -1.0;
  double y_hi = 2.0;
  std::size_t points = 301;
};

std::vector<GradientFieldPoint> gradient_field(const GradientFieldSpec& spec);

struct GumbelPlotSpec {
  double alpha = 0.9;
  std::vector<double> lambdas{0.01, 0.05, 0.1};
  double mu_l_lo = -2.0;
  double mu_l_hi = -0.85;  // must stay below the largest valid mu_l (about -0.834 at 0.9)
  std::size_t points = 161;
};

struct NamedBand {
  std::string dataset;
  std::string method;
  Band band;
};

struct ReportBundle {
  std::vector<BenchmarkRecord> records;
  std::string config_json = "{}";
  std::vector<NamedBand> bands;
  GradientFieldSpec gradient;
  GumbelPlotSpec gumbel;
  bool plots = true;
};

/// Writes results.json, summary.csv, summary.md and plotdata/*.csv under `dir`
/// (created if missing). Throws ConfigError on an empty record list and
/// IoError when a file cannot be written.
void emit_report(const std::filesystem::path& dir, const ReportBundle& bundle);

}  // namespace ik::bench
