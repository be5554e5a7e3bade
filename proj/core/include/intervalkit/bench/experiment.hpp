#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "intervalkit/bench/grid_search.hpp"
#include "intervalkit/bench/report.hpp"
#include "intervalkit/data/synthetic.hpp"

namespace ik::bench {

/// A dataset given either as a synthetic spec or a CSV file.
struct DatasetSource {
  bool synthetic = true;
  data::SyntheticSpec spec;
  std::filesystem::path csv;
  std::string target;  // CSV target column; empty = last
};

/// Loads or generates the dataset. Synthetic data are drawn from
/// mix_seed(master_seed, 1000 + index) so each listed dataset differs.
Dataset load_source(const DatasetSource& source, std::uint64_t master_seed, std::size_t index);

struct OrthogonalitySettings {
  std::vector<double> ladder;  // empty = default_orthogonality_ladder()
  double learning_rate = 1e-3;
  double dropout = 0.0;
  std::size_t epochs = 10000;
  std::size_t batch_size = 1024;
  std::size_t patience = 200;
  Checkpointing checkpointing = Checkpointing::best_validation_loss;
  SplitRatios split = SplitRatios::orthogonal_protocol();
};

struct ExperimentConfig {
  std::uint64_t seed = 0;  // master seed
  double alpha = 0.9;
  double coverage_margin = 0.025;
  std::vector<DatasetSource> datasets;
  std::vector<Method> methods;
  std::size_t seeds = 10;
  std::size_t epochs = 400;
  std::size_t batch_size = 10000;
  std::size_t hidden = 64;  // 0 = linear model
  std::size_t patience = 0;
  Checkpointing checkpointing = Checkpointing::coverage_gated;
  SplitRatios split = SplitRatios::width_protocol();
  std::vector<double> learning_rates{1e-2, 1e-3};
  std::vector<double> dropouts{0.0, 0.1};
  /// Regularization grid per method; methods without an entry use their default.
  std::map<Method, std::vector<double>> lambdas;
  /// Ignore the grid lists above and use the full hyperparameter grid.
  bool full_grid = false;
  OrthogonalitySettings rqr_o;
  bool plots = true;

  /// Throws ConfigError on empty lists or invalid values.
  void validate() const;
  /// Grid used for `m`, honouring full_grid and the per-method lambdas.
  HyperGrid grid_for(Method m) const;
  /// Per-run seeds mix_seed(seed, k), k < seeds.
  std::vector<std::uint64_t> seed_list() const;
};

std::vector<double> default_lambdas(Method m);
HyperGrid full_hyper_grid(Method m);

data::SyntheticSpec synthetic_spec_from_json(const std::string& text);
/// Relative CSV paths resolve against `base_dir`. Throws ConfigError on
/// unknown keys, mistyped values or failed validation.
ExperimentConfig experiment_from_json(const std::string& text,
                                      const std::filesystem::path& base_dir = {});
/// Resolved config with every default filled in.
std::string to_json(const ExperimentConfig& config);

struct ExperimentResult {
  std::vector<BenchmarkRecord> records;
  std::vector<NamedBand> bands;
};

using ProgressLog = std::function<void(const std::string&)>;

/// Every dataset x method, in config order. Results depend only on the
/// config, never on `jobs`.
ExperimentResult run_experiment(const ExperimentConfig& config, std::size_t jobs,
                                const ProgressLog& log = {});

/// Single training run (the `train` verb).
struct TrainJob {
  DatasetSource dataset;
  TrainConfig train;
  SplitRatios split = SplitRatios::width_protocol();
  std::uint64_t seed = 0;  // split and training seed index
};

TrainJob train_job_from_json(const std::string& text, const std::filesystem::path& base_dir = {});
std::string to_json(const TrainJob& job);

}  // namespace ik::bench
