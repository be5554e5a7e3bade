#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "intervalkit/core/matrix.hpp"
#include "intervalkit/core/rng.hpp"

namespace ik::net {

enum class Mode { train, eval };

/// Activations recorded by a forward pass for the matching backward pass.
struct ForwardCache {
  Matrix inputs;
  Matrix pre_activation;  // layer-1 affine output
  Matrix hidden;          // after rectifier and dropout
  Matrix mask;            // 0 or 1/(1-p) per hidden unit; all 1 in eval mode
  std::uint64_t version = 0;
};

/// inputs -> affine(H) -> ReLU -> dropout -> affine(out).
///
/// All parameters live in one flat vector laid out as
/// [W1 (d x H, row-major) | b1 (H) | W2 (H x out, row-major) | b2 (out)],
/// which is also the layout of gradients and optimizer moments.
///
/// H = 0 gives a single affine layer [W2 (d x out) | b2 (out)] with no
/// hidden units and no dropout.
class Mlp {
 public:
  Mlp() = default;
  /// Zero-initialized. Throws ConfigError on zero input/output sizes or dropout outside [0, 1).
  Mlp(std::size_t inputs, std::size_t hidden, std::size_t outputs, double dropout = 0.0);

  /// Weights uniform in +-sqrt(6 / (fan_in + fan_out)), biases uniform in +-1/sqrt(fan_in).
  static Mlp glorot(std::size_t inputs, std::size_t hidden, std::size_t outputs, double dropout,
                    Rng& rng);

  std::size_t inputs() const noexcept { return d_; }
  std::size_t hidden() const noexcept { return h_; }
  std::size_t outputs() const noexcept { return out_; }
  double dropout() const noexcept { return dropout_; }
  std::size_t parameter_count() const noexcept { return params_.size(); }
  bool linear() const noexcept { return h_ == 0; }

  std::span<const double> parameters() const noexcept { return params_; }
  /// Mutable view; invalidates every outstanding ForwardCache.
  std::span<double> mutable_parameters();
  std::uint64_t version() const noexcept { return version_; }

  double w1(std::size_t i, std::size_t j) const { return params_[i * h_ + j]; }
  double b1(std::size_t j) const { return params_[d_ * h_ + j]; }
  double w2(std::size_t j, std::size_t k) const { return params_[w2_offset() + j * out_ + k]; }
  /// Output layer; its rows are hidden units, or inputs for a linear model.
  double b2(std::size_t k) const { return params_[b2_offset() + k]; }

  /// Train mode draws dropout masks from `rng`; eval mode never touches it.
  /// Throws StructuralError when the input width differs from inputs().
  Matrix forward(const Matrix& x, Mode mode, Rng& rng, ForwardCache* cache = nullptr) const;
  /// Eval-mode forward pass.
  Matrix predict(const Matrix& x) const;

  /// Parameter gradients given d(objective)/d(output) for each example; the
  /// objective's batch averaging is already inside `output_gradients`.
  /// Throws UsageError when `cache` does not come from this parameter state.
  std::vector<double> backward(const ForwardCache& cache, const Matrix& output_gradients) const;

  void swap_outputs();

  bool operator==(const Mlp& other) const;

 private:
  std::size_t w2_offset() const noexcept { return d_ * h_ + h_; }
  std::size_t b2_offset() const noexcept { return w2_offset() + (linear() ? d_ : h_) * out_; }
  void touch();

  std::size_t d_ = 0;
  std::size_t h_ = 0;
  std::size_t out_ = 0;
  double dropout_ = 0.0;
  std::vector<double> params_;
  std::uint64_t version_ = 0;
};

struct AdamState {
  std::vector<double> m;
  std::vector<double> v;
  std::uint64_t step = 0;
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;

  static AdamState for_model(const Mlp& model, double learning_rate);
};

/// One bias-corrected Adam update. Throws StructuralError on shape mismatch.
void adam_step(Mlp& model, std::span<const double> gradients, AdamState& state);

}  // namespace ik::net
