#include "intervalkit/bench/train.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "intervalkit/core/errors.hpp"
#include "intervalkit/core/rng.hpp"

namespace ik::bench {

namespace {

Matrix gather_rows(const Matrix& x, const std::size_t* rows, std::size_t count) {
  Matrix out(count, x.cols());
  for (std::size_t r = 0; r < count; ++r) {
    const auto src = x.row(rows[r]);
    std::copy(src.begin(), src.end(), out.row(r).begin());
  }
  return out;
}

std::vector<double> gather(const std::vector<double>& v, const std::size_t* rows, std::size_t count) {
  std::vector<double> out(count);
  for (std::size_t r = 0; r < count; ++r) out[r] = v[rows[r]];
  return out;
}

double parameter_norm(const net::Mlp& m) {
  double s = 0.0;
  for (double p : m.parameters()) s += p * p;
  return std::sqrt(s);
}

// Loss value and d(loss)/d(output) for one batch.
struct BatchObjective {
  double loss = 0.0;
  Matrix output_gradient;
};

BatchObjective batch_objective(const TrainConfig& config, const losses::LossConfig& loss,
                               const Matrix& out, const std::vector<double>& y,
                               const std::vector<double>* q) {
  BatchObjective b;
  b.output_gradient = Matrix(out.rows(), out.cols());
  if (is_quantile_conditioned(config.method)) {
    const auto eval = losses::evaluate_quantile_batch(out.values(), y, *q);
    b.loss = eval.loss;
    for (std::size_t r = 0; r < out.rows(); ++r) b.output_gradient(r, 0) = eval.gradients[r].d_mu1;
    return b;
  }
  std::vector<Bounds> bounds(out.rows());
  for (std::size_t r = 0; r < out.rows(); ++r) bounds[r] = {out(r, 0), out(r, 1)};
  const auto eval = losses::evaluate_batch(loss, bounds, y);
  b.loss = eval.loss;
  for (std::size_t r = 0; r < out.rows(); ++r) {
    b.output_gradient(r, 0) = eval.gradients[r].d_mu1;
    b.output_gradient(r, 1) = eval.gradients[r].d_mu2;
  }
  return b;
}

metrics::EvalReport quick_eval(const net::Mlp& model, Method method, const Matrix& x,
                               const std::vector<double>& y, const std::vector<double>& quantiles) {
  const IntervalBatch iv = predict_intervals(model, method, x, quantiles);
  metrics::EvalReport r;
  r.n = y.size();
  r.picp = metrics::picp(iv, y);
  r.mpiw = metrics::mpiw(iv);
  return r;
}

}  // namespace

std::string_view to_string(Checkpointing c) {
  switch (c) {
    case Checkpointing::final_epoch:
      return "final_epoch";
    case Checkpointing::best_validation_loss:
      return "best_validation_loss";
    default:
      return "coverage_gated";
  }
}

Checkpointing parse_checkpointing(std::string_view name) {
  if (name == "coverage_gated") return Checkpointing::coverage_gated;
  if (name == "final_epoch") return Checkpointing::final_epoch;
  if (name == "best_validation_loss") return Checkpointing::best_validation_loss;
  throw ConfigError("unknown checkpointing '" + std::string(name) +
                    "' (expected coverage_gated, final_epoch or best_validation_loss)");
}

void TrainConfig::validate() const {
  loss().validate();
  if (batch_size == 0) throw ConfigError("batch_size must be positive");
  if (!(learning_rate >= 0.0) || !std::isfinite(learning_rate))
    throw ConfigError("learning_rate must be finite and nonnegative");
  if (!(dropout >= 0.0 && dropout < 1.0)) throw ConfigError("dropout must lie in [0, 1)");
  if (!(coverage_margin >= 0.0)) throw ConfigError("coverage_margin must be nonnegative");
}

double evaluate_objective(const net::Mlp& model, const TrainConfig& config, const Dataset& data,
                          const std::vector<std::size_t>& rows) {
  const Matrix x = gather_rows(data.features, rows.data(), rows.size());
  const std::vector<double> y = gather(data.targets, rows.data(), rows.size());
  if (is_quantile_conditioned(config.method)) {
    // Average pinball loss over an even quantile grid stands in for the
    // stochastic quantile draw.
    double total = 0.0;
    constexpr int kLevels = 9;
    for (int k = 1; k <= kLevels; ++k) {
      const double q = static_cast<double>(k) / (kLevels + 1);
      const Matrix out = model.predict(with_quantile_column(x, q));
      const std::vector<double> qs(rows.size(), q);
      total += losses::evaluate_quantile_batch(out.values(), y, qs).loss;
    }
    return total / kLevels;
  }
  const Matrix out = model.predict(x);
  const losses::LossConfig loss = config.loss();
  return batch_objective(config, loss, out, y, nullptr).loss;
}

std::vector<double> narrowest_quantile_pair(const net::Mlp& model, double alpha, const Matrix& x) {
  std::vector<double> best{0.0, alpha};
  double best_width = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < kSqrNarrowSteps; ++k) {
    const double lo = (1.0 - alpha) * static_cast<double>(k) / static_cast<double>(kSqrNarrowSteps - 1);
    const double hi = lo + alpha;
    const IntervalBatch iv = predict_intervals(model, Method::SQR_N, x, {lo, hi});
    const double w = metrics::mpiw(iv);
    if (w < best_width) {
      best_width = w;
      best = {lo, hi};
    }
  }
  return best;
}

TrainResult train(const Dataset& data, const Split& split, const TrainConfig& config) {
  data.validate();
  config.validate();
  if (split.train.empty() || split.val.empty())
    throw ConfigError("training needs nonempty train and validation splits");

  const losses::LossConfig loss = config.loss();
  const bool sqr = is_quantile_conditioned(config.method);
  const Rng master(config.seed);
  Rng init_rng = master.derive(0);
  Rng shuffle_rng = master.derive(1);
  Rng dropout_rng = master.derive(2);
  Rng quantile_rng = master.derive(3);

  TrainResult result;
  result.model = net::Mlp::glorot(model_inputs(config.method, data.feature_count()), config.hidden,
                                  model_outputs(config.method), config.dropout, init_rng);
  if (sqr) result.quantiles = centered_quantiles(config.alpha);

  const Matrix x_val = gather_rows(data.features, split.val.data(), split.val.size());
  const std::vector<double> y_val = gather(data.targets, split.val.data(), split.val.size());

  net::Mlp& model = result.model;
  net::AdamState adam = net::AdamState::for_model(model, config.learning_rate);
  const std::size_t n = split.train.size();
  const std::size_t batch = std::min(config.batch_size, n);

  net::Mlp best_model = model;
  double best_width = std::numeric_limits<double>::infinity();
  double best_gap = std::numeric_limits<double>::infinity();
  double best_val_loss = std::numeric_limits<double>::infinity();
  std::size_t since_improvement = 0;

  // Full-batch epochs see the same rows every time; gather them once.
  const bool full_batch = batch >= n;
  const Matrix x_full = full_batch ? gather_rows(data.features, split.train.data(), n) : Matrix();
  const std::vector<double> y_full =
      full_batch ? gather(data.targets, split.train.data(), n) : std::vector<double>();

  for (std::size_t epoch = 1; epoch <= config.epochs; ++epoch) {
    std::vector<std::size_t> order;
    if (!full_batch) {
      order = shuffle_rng.permutation(n);
      for (std::size_t& o : order) o = split.train[o];
    }
    double epoch_loss = 0.0;
    std::size_t batches = 0;
    for (std::size_t start = 0; start < n; start += batch) {
      const std::size_t count = std::min(batch, n - start);
      Matrix xb = full_batch ? x_full : gather_rows(data.features, order.data() + start, count);
      const std::vector<double> yb =
          full_batch ? y_full : gather(data.targets, order.data() + start, count);
      std::vector<double> qb;
      if (sqr) {
        qb.resize(count);
        for (double& q : qb) q = quantile_rng.uniform_open();
        xb = with_quantile_column(xb, qb);
      }
      net::ForwardCache cache;
      const Matrix out = model.forward(xb, net::Mode::train, dropout_rng, &cache);
      const BatchObjective obj = batch_objective(config, loss, out, yb, sqr ? &qb : nullptr);
      if (!std::isfinite(obj.loss)) {
        std::ostringstream msg;
        msg << "non-finite training loss at epoch " << epoch << ", batch " << batches + 1
            << " (method " << to_string(config.method) << ", parameter norm "
            << parameter_norm(model) << ", learning rate " << config.learning_rate << ")";
        throw NumericError(msg.str());
      }
      const std::vector<double> grad = model.backward(cache, obj.output_gradient);
      net::adam_step(model, grad, adam);
      epoch_loss += obj.loss;
      ++batches;
    }

    EpochTrace t;
    t.epoch = epoch;
    t.train_loss = epoch_loss / static_cast<double>(batches);
    const metrics::EvalReport v = quick_eval(model, config.method, x_val, y_val, result.quantiles);
    t.val_picp = v.picp;
    t.val_mpiw = v.mpiw;
    const bool by_loss = config.checkpointing == Checkpointing::best_validation_loss;
    if (config.patience > 0 || by_loss)
      t.val_loss = evaluate_objective(model, config, data, split.val);
    result.trace.push_back(t);
    const bool improved = (config.patience > 0 || by_loss) && t.val_loss < best_val_loss;
    if (improved) best_val_loss = t.val_loss;

    const bool qualifies = std::isfinite(v.mpiw) && v.picp >= config.alpha - config.coverage_margin;
    const double gap = std::abs(v.picp - config.alpha);
    if (config.checkpointing == Checkpointing::final_epoch) {
      result.qualified = qualifies;
      result.best_epoch = epoch;
    } else if (by_loss) {
      if (improved) {
        result.qualified = qualifies;
        result.best_epoch = epoch;
        best_model = model;
      }
    } else if (qualifies) {
      if (!result.qualified || v.mpiw < best_width) {
        best_width = v.mpiw;
        result.qualified = true;
        result.best_epoch = epoch;
        best_model = model;
      }
    } else if (!result.qualified && gap < best_gap) {
      best_gap = gap;
      result.best_epoch = epoch;
      best_model = model;
    }

    if (config.patience > 0) {
      if (improved) {
        since_improvement = 0;
      } else if (++since_improvement >= config.patience) {
        result.stopped_early = true;
        break;
      }
    }
  }

  if (config.epochs > 0 && config.checkpointing != Checkpointing::final_epoch) model = best_model;
  if (config.method == Method::SQR_N)
    result.quantiles = narrowest_quantile_pair(model, config.alpha, x_val);
  return result;
}

metrics::EvalReport evaluate_rows(const TrainResult& result, Method method, const Dataset& data,
                                  const std::vector<std::size_t>& rows) {
  const Matrix x = gather_rows(data.features, rows.data(), rows.size());
  const std::vector<double> y = gather(data.targets, rows.data(), rows.size());
  return metrics::evaluate(predict_intervals(result.model, method, x, result.quantiles), y);
}

}  // namespace ik::bench
