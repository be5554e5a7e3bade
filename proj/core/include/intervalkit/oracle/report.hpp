#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace ik::oracle {

/// Parameters of the `verify` suite. Every check can be switched off.
struct VerifyConfig {
  std::uint64_t seed = 42;

  bool exactness = true;  // finite-sample coverage of the RQR / RQR-W minimizers
  std::size_t exactness_datasets = 50;
  std::vector<std::size_t> exactness_sizes{5, 10, 20};
  std::vector<double> exactness_alphas{0.5, 0.8};
  std::vector<double> exactness_lambdas{0.05, 0.1};

  bool variance = true;  // true-miscoverage variance bound
  std::size_t variance_n = 100;
  std::size_t variance_resamples = 200;
  double variance_alpha = 0.8;

  bool gumbel = true;
  double gumbel_alpha = 0.9;
  std::vector<double> gumbel_lambdas{0.01, 0.05, 0.1};
  /// mu_l window over which the width must be increasing (the neighbourhood of both minimizers).
  double gumbel_plot_lo = -1.3;
  double gumbel_plot_hi = -0.85;

  bool bound_variance = true;
  double bound_alpha = 0.8;
  std::vector<std::size_t> bound_sizes{100, 1000};
  std::size_t bound_resamples = 500;

  bool convexity = true;
  double convexity_alpha = 0.8;
  double convexity_lambda = 0.2;
};

/// Throws ConfigError on unknown keys or mistyped values.
VerifyConfig verify_config_from_json(const std::string& text);
std::string to_json(const VerifyConfig& config);

struct CheckOutcome {
  std::string name;
  bool passed = false;
  std::string detail;  // one human-readable line
  std::string record;  // JSON object with inputs echoed and measured values
  double seconds = 0.0;
};

std::vector<CheckOutcome> run_verify(const VerifyConfig& config, std::size_t jobs = 1);

/// {"config": ..., "checks": [...]} without timings, so reruns are byte-identical.
std::string verify_report_json(const VerifyConfig& config, const std::vector<CheckOutcome>& checks);

}  // namespace ik::oracle
