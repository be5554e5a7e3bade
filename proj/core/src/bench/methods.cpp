#include "intervalkit/bench/methods.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <string>
#include <utility>

#include "intervalkit/core/errors.hpp"

namespace ik::bench {

namespace {

constexpr std::array<std::pair<Method, std::string_view>, 7> kNames{{
    {Method::QR, "QR"},
    {Method::RQR, "RQR"},
    {Method::RQR_W, "RQR-W"},
    {Method::RQR_O, "RQR-O"},
    {Method::SQR_C, "SQR-C"},
    {Method::SQR_N, "SQR-N"},
    {Method::IR, "IR"},
}};

// Sigmoid sharpness used by the differentiable coverage count in IR, as in
// the quality-driven interval loss it comes from.
constexpr double kIrSharpness = 160.0;

}  // namespace

std::string_view to_string(Method m) {
  for (const auto& [k, name] : kNames)
    if (k == m) return name;
  return "UNKNOWN";
}

Method parse_method(std::string_view name) {
  std::string key(name);
  for (char& ch : key) {
    ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
    if (ch == '_') ch = '-';
  }
  for (const auto& [k, n] : kNames)
    if (n == key) return k;
  throw ConfigError("unknown method '" + std::string(name) + "'");
}

bool is_quantile_conditioned(Method m) { return m == Method::SQR_C || m == Method::SQR_N; }

bool has_regularization(Method m) { return m == Method::RQR_W || m == Method::IR; }

losses::LossConfig loss_for(Method m, double alpha, double lambda) {
  losses::LossConfig c;
  c.alpha = alpha;
  switch (m) {
    case Method::QR: c.family = losses::LossFamily::QR_PINBALL; break;
    case Method::RQR: c.family = losses::LossFamily::RQR; break;
    case Method::RQR_W:
      c.family = losses::LossFamily::RQR_W;
      c.lambda = lambda;
      break;
    case Method::RQR_O:
      c.family = losses::LossFamily::RQR_O;
      c.lambda = lambda;
      break;
    case Method::SQR_C:
    case Method::SQR_N: c.family = losses::LossFamily::SQR_PINBALL; break;
    case Method::IR:
      c.family = losses::LossFamily::IR;
      c.lambda = lambda;
      c.ir_soft_sharpness = kIrSharpness;
      break;
  }
  return c;
}

std::size_t model_inputs(Method m, std::size_t features) {
  return is_quantile_conditioned(m) ? features + 1 : features;
}

std::size_t model_outputs(Method m) { return is_quantile_conditioned(m) ? 1 : 2; }

Matrix with_quantile_column(const Matrix& x, double q) {
  return with_quantile_column(x, std::vector<double>(x.rows(), q));
}

Matrix with_quantile_column(const Matrix& x, const std::vector<double>& q) {
  if (q.size() != x.rows()) throw StructuralError("one quantile level per row is required");
  Matrix out(x.rows(), x.cols() + 1);
  for (std::size_t r = 0; r < x.rows(); ++r) {
    const auto src = x.row(r);
    auto dst = out.row(r);
    std::copy(src.begin(), src.end(), dst.begin());
    dst[x.cols()] = q[r];
  }
  return out;
}

IntervalBatch predict_intervals(const net::Mlp& model, Method m, const Matrix& x,
                                const std::vector<double>& quantiles) {
  if (is_quantile_conditioned(m)) {
    if (quantiles.size() != 2)
      throw UsageError("quantile-conditioned prediction needs a (lo, hi) quantile pair");
    const Matrix lo = model.predict(with_quantile_column(x, quantiles[0]));
    const Matrix hi = model.predict(with_quantile_column(x, quantiles[1]));
    return IntervalBatch::canonicalize(lo.values(), hi.values());
  }
  const Matrix out = model.predict(x);
  std::vector<double> a(out.rows()), b(out.rows());
  for (std::size_t r = 0; r < out.rows(); ++r) {
    a[r] = out(r, 0);
    b[r] = out(r, 1);
  }
  return IntervalBatch::canonicalize(a, b);
}

std::vector<double> centered_quantiles(double alpha) {
  const double lo = (1.0 - alpha) / 2.0;
  return {lo, 1.0 - lo};
}

}  // namespace ik::bench
