#pragma once

#include <string_view>
#include <vector>

#include "intervalkit/core/interval.hpp"
#include "intervalkit/core/matrix.hpp"
#include "intervalkit/losses/losses.hpp"
#include "intervalkit/net/mlp.hpp"

namespace ik::bench {

enum class Method { QR, RQR, RQR_W, RQR_O, SQR_C, SQR_N, IR };

std::string_view to_string(Method m);
/// Accepts "RQR-W" and "RQR_W" spellings, case-insensitive.
Method parse_method(std::string_view name);

/// Quantile-conditioned single-output network (SQR-C, SQR-N).
bool is_quantile_conditioned(Method m);
/// Whether the method has a regularization weight to grid over.
bool has_regularization(Method m);

/// Loss family and its parameters for `m` at coverage alpha and weight lambda.
losses::LossConfig loss_for(Method m, double alpha, double lambda);

/// Network input width for a dataset with `features` columns.
std::size_t model_inputs(Method m, std::size_t features);
std::size_t model_outputs(Method m);

/// Rows of `x` with a constant extra column q appended.
Matrix with_quantile_column(const Matrix& x, double q);
Matrix with_quantile_column(const Matrix& x, const std::vector<double>& q);

/// Intervals predicted in eval mode. Two-output methods canonicalize the two
/// heads; quantile-conditioned ones query the network at `quantiles` (lo, hi).
IntervalBatch predict_intervals(const net::Mlp& model, Method m, const Matrix& x,
                                const std::vector<double>& quantiles = {});

/// Centered pair ((1-alpha)/2, 1-(1-alpha)/2).
std::vector<double> centered_quantiles(double alpha);

}  // namespace ik::bench
