#include "intervalkit/bench/grid_search.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include "intervalkit/core/errors.hpp"
#include "intervalkit/core/rng.hpp"
#include "intervalkit/core/task_pool.hpp"
#include "intervalkit/data/preprocess.hpp"

namespace ik::bench {

namespace {

struct TaskOutcome {
  std::optional<TrainResult> result;
  metrics::EvalReport val;
  std::string error;
};

}  // namespace

std::uint64_t split_seed(std::uint64_t s) { return mix_seed(s, 0x5EED); }
std::uint64_t train_seed(std::uint64_t s) { return mix_seed(s, 0x7A1); }

GridSearchResult grid_search(const Dataset& raw, const HyperGrid& grid, const RunOptions& options) {
  if (grid.learning_rates.empty() || grid.dropouts.empty() || grid.lambdas.empty())
    throw ConfigError("grid_search needs a nonempty grid");
  if (options.seeds.empty()) throw ConfigError("grid_search needs at least one seed");
  options.base.validate();
  const Method method = options.base.method;
  const std::vector<double> lambdas =
      has_regularization(method) ? grid.lambdas : std::vector<double>{options.base.lambda};

  std::vector<CellChoice> cells;
  for (double lr : grid.learning_rates)
    for (double dr : grid.dropouts)
      for (double lam : lambdas) cells.push_back({lr, dr, lam, {}});

  const std::size_t n_seeds = options.seeds.size();
  std::vector<std::pair<Dataset, Split>> prepared;
  prepared.reserve(n_seeds);
  for (std::uint64_t s : options.seeds)
    prepared.push_back(data::preprocess_and_split(raw, options.ratios, split_seed(s)));

  std::vector<TaskOutcome> tasks(cells.size() * n_seeds);
  parallel_for(tasks.size(), options.jobs, [&](std::size_t t) {
    const CellChoice& cell = cells[t / n_seeds];
    const std::size_t si = t % n_seeds;
    TrainConfig cfg = options.base;
    cfg.learning_rate = cell.learning_rate;
    cfg.dropout = cell.dropout;
    cfg.lambda = cell.lambda;
    cfg.seed = train_seed(options.seeds[si]);
    const auto& [ds, split] = prepared[si];
    try {
      TrainResult r = train(ds, split, cfg);
      tasks[t].val = evaluate_rows(r, method, ds, split.val);
      tasks[t].result = std::move(r);
    } catch (const NumericError& e) {
      tasks[t].error = e.what();
    }
  });

  GridSearchResult out;
  const double alpha = options.base.alpha;
  const double margin = options.base.coverage_margin;
  std::optional<std::size_t> winner;
  bool winner_qualifies = false;
  double best_width = std::numeric_limits<double>::infinity();
  double best_gap = std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < cells.size(); ++c) {
    CellSummary s;
    s.choice = cells[c];
    for (std::size_t si = 0; si < n_seeds; ++si) {
      const TaskOutcome& t = tasks[c * n_seeds + si];
      if (!t.result) {
        s.failed = true;
        s.reason = t.error;
        break;
      }
      s.val_picp += t.val.picp;
      s.val_mpiw += t.val.mpiw;
    }
    if (!s.failed) {
      s.val_picp /= static_cast<double>(n_seeds);
      s.val_mpiw /= static_cast<double>(n_seeds);
      if (!std::isfinite(s.val_mpiw) || !std::isfinite(s.val_picp)) {
        s.failed = true;
        s.reason = "non-finite validation metrics";
      }
    }
    if (!s.failed) {
      s.qualifies = s.val_picp >= alpha - margin;
      const double gap = std::abs(s.val_picp - alpha);
      if (s.qualifies) {
        if (!winner_qualifies || s.val_mpiw < best_width) {
          winner = c;
          winner_qualifies = true;
          best_width = s.val_mpiw;
        }
      } else if (!winner_qualifies && gap < best_gap) {
        winner = c;
        best_gap = gap;
      }
    }
    out.cells.push_back(s);
  }

  BenchmarkRecord& rec = out.record;
  rec.dataset = raw.name;
  rec.method = std::string(to_string(method));
  rec.alpha = alpha;
  rec.coverage_margin = margin;
  if (!winner) {
    rec.has_winner = false;
    rec.note = "every grid cell failed";
    for (const auto& s : out.cells)
      if (!s.reason.empty()) {
        rec.note += ": " + s.reason;
        break;
      }
    rec.aggregate();
    return out;
  }

  out.has_winner = true;
  rec.choice = cells[*winner];
  out.best = options.base;
  out.best.learning_rate = rec.choice.learning_rate;
  out.best.dropout = rec.choice.dropout;
  out.best.lambda = rec.choice.lambda;
  for (std::size_t si = 0; si < n_seeds; ++si) {
    const TrainResult& r = *tasks[*winner * n_seeds + si].result;
    const auto& [ds, split] = prepared[si];
    rec.per_seed.push_back(evaluate_rows(r, method, ds, split.test));
    rec.choice.quantiles = r.quantiles;
    if (si == 0) {
      Matrix x(split.test.size(), ds.feature_count());
      for (std::size_t k = 0; k < split.test.size(); ++k) {
        const auto src = ds.features.row(split.test[k]);
        std::copy(src.begin(), src.end(), x.row(k).begin());
        out.band.y.push_back(ds.targets[split.test[k]]);
      }
      const IntervalBatch iv = predict_intervals(r.model, method, x, r.quantiles);
      out.band.lower = iv.lower();
      out.band.upper = iv.upper();
    }
  }
  if (!winner_qualifies) rec.note = "no cell reached the validation coverage gate";
  rec.aggregate();
  return out;
}

}  // namespace ik::bench
