#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

#include "intervalkit/bench/methods.hpp"
#include "intervalkit/core/dataset.hpp"
#include "intervalkit/metrics/metrics.hpp"
#include "intervalkit/net/mlp.hpp"

namespace ik::bench {

/// Which epoch's parameters train() keeps.
enum class Checkpointing {
  coverage_gated,  // narrowest validation interval among epochs meeting the coverage gate
  final_epoch,     // parameters after the last epoch (converged-fit protocols)
  best_validation_loss,  // lowest validation objective (early-stopping protocols)
};

std::string_view to_string(Checkpointing c);
/// Throws ConfigError for unknown names.
Checkpointing parse_checkpointing(std::string_view name);

struct TrainConfig {
  Method method = Method::RQR;
  double alpha = 0.9;
  double lambda = 0.0;  // regularization weight of the method, if any
  std::size_t epochs = 400;
  std::size_t batch_size = 10000;  // larger than the training split -> full batch
  double learning_rate = 1e-3;
  double dropout = 0.0;
  std::size_t hidden = 64;  // 0 = a single affine layer
  Checkpointing checkpointing = Checkpointing::coverage_gated;
  std::uint64_t seed = 0;
  /// Stop after this many epochs without a lower validation loss; 0 disables.
  std::size_t patience = 0;
  /// Checkpoints qualify when validation PICP >= alpha - margin.
  double coverage_margin = 0.025;

  losses::LossConfig loss() const { return loss_for(method, alpha, lambda); }
  /// Throws ConfigError on invalid values.
  void validate() const;
};

struct EpochTrace {
  std::size_t epoch = 0;  // 1-based
  double train_loss = 0.0;
  double val_loss = 0.0;
  double val_picp = 0.0;
  double val_mpiw = 0.0;
};

struct TrainResult {
  net::Mlp model;
  std::vector<EpochTrace> trace;
  std::size_t best_epoch = 0;  // 0 = the initialization (no epochs run)
  bool qualified = false;      // best epoch met the coverage gate
  bool stopped_early = false;
  /// Quantile pair used for prediction by quantile-conditioned methods.
  std::vector<double> quantiles;
};

/// Mini-batch Adam on split.train of an already preprocessed dataset,
/// validating on split.val after every epoch. Keeps the epoch with the
/// smallest validation MPIW among those with PICP >= alpha - margin, or the
/// epoch whose PICP is closest to alpha when none qualifies. For SQR-N the
/// narrowest (q, q + alpha) pair is then chosen on validation.
/// Throws NumericError (with epoch, batch and parameter norm) on a non-finite loss.
TrainResult train(const Dataset& data, const Split& split, const TrainConfig& config);

/// Same objective the trainer minimizes, evaluated once on `rows` in eval mode.
double evaluate_objective(const net::Mlp& model, const TrainConfig& config, const Dataset& data,
                          const std::vector<std::size_t>& rows);

/// Eval-mode metrics of a trained model on `rows`.
metrics::EvalReport evaluate_rows(const TrainResult& result, Method method, const Dataset& data,
                                  const std::vector<std::size_t>& rows);

/// Number of evenly spaced lower quantiles scanned by SQR-N.
inline constexpr std::size_t kSqrNarrowSteps = 101;

/// Lower quantile in [0, 1 - alpha] minimizing validation MPIW of (q, q + alpha).
std::vector<double> narrowest_quantile_pair(const net::Mlp& model, double alpha, const Matrix& x);

}  // namespace ik::bench
