#include "intervalkit/net/mlp.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <string>

#include "intervalkit/core/errors.hpp"

namespace ik::net {

namespace {

std::atomic<std::uint64_t> g_version{0};

std::uint64_t next_version() { return ++g_version; }

}  // namespace

Mlp::Mlp(std::size_t inputs, std::size_t hidden, std::size_t outputs, double dropout)
    : d_(inputs), h_(hidden), out_(outputs), dropout_(dropout) {
  if (inputs == 0 || outputs == 0) throw ConfigError("network sizes must be positive");
  if (!(dropout >= 0.0 && dropout < 1.0)) throw ConfigError("dropout must lie in [0, 1)");
  params_.assign(linear() ? d_ * out_ + out_ : d_ * h_ + h_ + h_ * out_ + out_, 0.0);
  touch();
}

Mlp Mlp::glorot(std::size_t inputs, std::size_t hidden, std::size_t outputs, double dropout,
                Rng& rng) {
  Mlp m(inputs, hidden, outputs, dropout);
  if (m.linear()) {
    const double a = std::sqrt(6.0 / static_cast<double>(inputs + outputs));
    const double c = 1.0 / std::sqrt(static_cast<double>(inputs));
    for (std::size_t i = 0; i < inputs * outputs; ++i) m.params_[i] = rng.uniform(-a, a);
    for (std::size_t k = 0; k < outputs; ++k) m.params_[m.b2_offset() + k] = rng.uniform(-c, c);
    return m;
  }
  const double a1 = std::sqrt(6.0 / static_cast<double>(inputs + hidden));
  const double a2 = std::sqrt(6.0 / static_cast<double>(hidden + outputs));
  for (std::size_t i = 0; i < inputs * hidden; ++i) m.params_[i] = rng.uniform(-a1, a1);
  for (std::size_t i = 0; i < hidden * outputs; ++i)
    m.params_[m.w2_offset() + i] = rng.uniform(-a2, a2);
  // Nonzero biases break the head symmetry when inputs carry no signal
  // (e.g. a standardized constant feature): identical heads never separate.
  const double c1 = 1.0 / std::sqrt(static_cast<double>(inputs));
  const double c2 = 1.0 / std::sqrt(static_cast<double>(hidden));
  for (std::size_t i = 0; i < hidden; ++i) m.params_[inputs * hidden + i] = rng.uniform(-c1, c1);
  for (std::size_t i = 0; i < outputs; ++i) m.params_[m.b2_offset() + i] = rng.uniform(-c2, c2);
  return m;
}

void Mlp::touch() { version_ = next_version(); }

std::span<double> Mlp::mutable_parameters() {
  touch();
  return params_;
}

Matrix Mlp::forward(const Matrix& x, Mode mode, Rng& rng, ForwardCache* cache) const {
  if (x.cols() != d_)
    throw StructuralError("forward: input has " + std::to_string(x.cols()) +
                          " columns, network expects " + std::to_string(d_));
  const std::size_t n = x.rows();
  if (linear()) {
    Matrix y(n, out_);
    const double* bp = params_.data() + b2_offset();
    for (std::size_t r = 0; r < n; ++r) {
      auto o = y.row(r);
      std::copy(bp, bp + out_, o.begin());
      for (std::size_t i = 0; i < d_; ++i)
        for (std::size_t k = 0; k < out_; ++k) o[k] += x(r, i) * params_[i * out_ + k];
    }
    if (cache) {
      *cache = ForwardCache{};
      cache->inputs = x;
      cache->version = version_;
    }
    return y;
  }
  const bool drop = mode == Mode::train && dropout_ > 0.0;
  const double keep_scale = 1.0 / (1.0 - dropout_);

  Matrix pre(n, h_);
  Matrix hid(n, h_);
  Matrix mask(n, h_, 1.0);
  Matrix y(n, out_);
  const double* b1p = params_.data() + d_ * h_;
  const double* w2p = params_.data() + w2_offset();
  const double* b2p = w2p + h_ * out_;

  for (std::size_t r = 0; r < n; ++r) {
    auto z = pre.row(r);
    std::copy(b1p, b1p + h_, z.begin());
    for (std::size_t i = 0; i < d_; ++i) {
      const double xi = x(r, i);
      if (xi == 0.0) continue;
      const double* wrow = params_.data() + i * h_;
      for (std::size_t j = 0; j < h_; ++j) z[j] += xi * wrow[j];
    }
    auto a = hid.row(r);
    auto mk = mask.row(r);
    for (std::size_t j = 0; j < h_; ++j) {
      if (drop) mk[j] = rng.uniform() < dropout_ ? 0.0 : keep_scale;
      a[j] = z[j] > 0.0 ? z[j] * mk[j] : 0.0;
    }
    auto o = y.row(r);
    std::copy(b2p, b2p + out_, o.begin());
    for (std::size_t j = 0; j < h_; ++j) {
      if (a[j] == 0.0) continue;
      for (std::size_t k = 0; k < out_; ++k) o[k] += a[j] * w2p[j * out_ + k];
    }
  }

  if (cache) {
    cache->inputs = x;
    cache->pre_activation = std::move(pre);
    cache->hidden = std::move(hid);
    cache->mask = std::move(mask);
    cache->version = version_;
  }
  return y;
}

Matrix Mlp::predict(const Matrix& x) const {
  Rng unused(0);
  return forward(x, Mode::eval, unused);
}

std::vector<double> Mlp::backward(const ForwardCache& cache, const Matrix& g_out) const {
  if (cache.version == 0 || cache.version != version_)
    throw UsageError("backward: cache is missing or stale for this parameter state");
  const std::size_t n = cache.inputs.rows();
  if (g_out.rows() != n || g_out.cols() != out_)
    throw StructuralError("backward: output gradient shape does not match the forward batch");

  std::vector<double> grad(params_.size(), 0.0);
  if (linear()) {
    double* gb = grad.data() + b2_offset();
    for (std::size_t r = 0; r < n; ++r) {
      const auto go = g_out.row(r);
      const auto x = cache.inputs.row(r);
      for (std::size_t k = 0; k < out_; ++k) gb[k] += go[k];
      for (std::size_t i = 0; i < d_; ++i)
        for (std::size_t k = 0; k < out_; ++k) grad[i * out_ + k] += x[i] * go[k];
    }
    return grad;
  }
  double* gw1 = grad.data();
  double* gb1 = grad.data() + d_ * h_;
  double* gw2 = grad.data() + w2_offset();
  double* gb2 = gw2 + h_ * out_;
  const double* w2p = params_.data() + w2_offset();

  std::vector<double> dz(h_);
  for (std::size_t r = 0; r < n; ++r) {
    const auto go = g_out.row(r);
    const auto a = cache.hidden.row(r);
    const auto z = cache.pre_activation.row(r);
    const auto mk = cache.mask.row(r);
    for (std::size_t k = 0; k < out_; ++k) gb2[k] += go[k];
    for (std::size_t j = 0; j < h_; ++j) {
      double dh = 0.0;
      for (std::size_t k = 0; k < out_; ++k) {
        gw2[j * out_ + k] += a[j] * go[k];
        dh += go[k] * w2p[j * out_ + k];
      }
      dz[j] = z[j] > 0.0 ? dh * mk[j] : 0.0;
      gb1[j] += dz[j];
    }
    const auto x = cache.inputs.row(r);
    for (std::size_t i = 0; i < d_; ++i) {
      if (x[i] == 0.0) continue;
      double* grow = gw1 + i * h_;
      for (std::size_t j = 0; j < h_; ++j) grow[j] += x[i] * dz[j];
    }
  }
  return grad;
}

void Mlp::swap_outputs() {
  if (out_ != 2) throw UsageError("swap_outputs needs a two-output network");
  double* w2p = params_.data() + w2_offset();
  const std::size_t rows = linear() ? d_ : h_;
  for (std::size_t j = 0; j < rows; ++j) std::swap(w2p[j * 2], w2p[j * 2 + 1]);
  std::swap(params_[b2_offset()], params_[b2_offset() + 1]);
  touch();
}

bool Mlp::operator==(const Mlp& other) const {
  return d_ == other.d_ && h_ == other.h_ && out_ == other.out_ && dropout_ == other.dropout_ &&
         params_ == other.params_;
}

AdamState AdamState::for_model(const Mlp& model, double learning_rate) {
  AdamState s;
  s.m.assign(model.parameter_count(), 0.0);
  s.v.assign(model.parameter_count(), 0.0);
  s.learning_rate = learning_rate;
  return s;
}

void adam_step(Mlp& model, std::span<const double> g, AdamState& s) {
  const std::size_t p = model.parameter_count();
  if (g.size() != p || s.m.size() != p || s.v.size() != p)
    throw StructuralError("adam_step: gradient or moment size does not match the parameters");
  ++s.step;
  const double t = static_cast<double>(s.step);
  const double c1 = 1.0 - std::pow(s.beta1, t);
  const double c2 = 1.0 - std::pow(s.beta2, t);
  auto w = model.mutable_parameters();
  for (std::size_t i = 0; i < p; ++i) {
    s.m[i] = s.beta1 * s.m[i] + (1.0 - s.beta1) * g[i];
    s.v[i] = s.beta2 * s.v[i] + (1.0 - s.beta2) * g[i] * g[i];
    const double mhat = s.m[i] / c1;
    const double vhat = s.v[i] / c2;
    w[i] -= s.learning_rate * mhat / (std::sqrt(vhat) + s.epsilon);
  }
}

}  // namespace ik::net
