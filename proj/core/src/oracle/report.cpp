#include "intervalkit/oracle/report.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "intervalkit/core/errors.hpp"
#include "intervalkit/core/rng.hpp"
#include "intervalkit/oracle/bound_variance.hpp"
#include "intervalkit/oracle/brute_force.hpp"
#include "intervalkit/oracle/convexity.hpp"
#include "intervalkit/oracle/coverage_variance.hpp"
#include "intervalkit/oracle/gumbel.hpp"
#include "json.hpp"

namespace ik::oracle {

using nlohmann::json;

namespace {

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

template <class T>
void read(const json& j, const char* key, T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("verify config: bad value for '") + key + "': " + e.what());
  }
}

CheckOutcome timed(const std::string& name, const std::function<void(CheckOutcome&)>& body) {
  CheckOutcome out;
  out.name = name;
  const auto t0 = std::chrono::steady_clock::now();
  body(out);
  out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

CheckOutcome exactness_check(const VerifyConfig& c, bool width_penalized) {
  const std::string name = width_penalized ? "finite_sample_coverage_rqr_w" : "finite_sample_coverage_rqr";
  return timed(name, [&](CheckOutcome& out) {
    json cases = json::array();
    std::size_t runs = 0, failures = 0;
    const std::vector<double> lambdas =
        width_penalized ? c.exactness_lambdas : std::vector<double>{0.0};
    const Rng master(c.seed);
    for (std::size_t n : c.exactness_sizes)
      for (double alpha : c.exactness_alphas) {
        const double an = alpha * static_cast<double>(n);
        if (std::abs(an - std::round(an)) > 1e-9) continue;
        for (double lambda : lambdas) {
          losses::LossConfig loss;
          loss.family = width_penalized ? losses::LossFamily::RQR_W : losses::LossFamily::RQR;
          loss.alpha = alpha;
          loss.lambda = lambda;
          std::size_t bad = 0;
          for (std::size_t d = 0; d < c.exactness_datasets; ++d) {
            Rng rng = master.derive(n * 1000 + d);
            std::vector<double> y(n);
            for (double& v : y) v = rng.normal();
            const OracleResult r = brute_force_minimize(loss, y, default_grid(y));
            ++runs;
            if (r.covered != static_cast<std::size_t>(std::llround(an))) ++bad;
          }
          failures += bad;
          cases.push_back({{"n", n}, {"alpha", alpha}, {"lambda", lambda},
                           {"datasets", c.exactness_datasets}, {"mismatches", bad}});
        }
      }
    out.passed = runs > 0 && failures == 0;
    out.detail = std::to_string(runs - failures) + "/" + std::to_string(runs) +
                 " minimizers hit coverage alpha exactly";
    out.record = json{{"cases", cases}, {"runs", runs}, {"mismatches", failures}}.dump();
  });
}

json variance_json(const VarianceCheck& v) {
  return {{"alpha", v.alpha},         {"n", v.n},
          {"resamples", v.resamples}, {"seed", v.seed},
          {"mean_gap", v.mean_gap},   {"mean_gap_se", v.mean_gap_se},
          {"mean_miscoverage", v.mean_miscoverage},
          {"variance", v.variance},   {"variance_se", v.variance_se},
          {"bound", v.bound}};
}

}  // namespace

VerifyConfig verify_config_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("verify config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("verify config must be a JSON object");
  static const std::vector<std::string> known{
      "verb", "seed", "exactness", "exactness_datasets", "exactness_sizes", "exactness_alphas",
      "exactness_lambdas", "variance", "variance_n", "variance_resamples", "variance_alpha",
      "gumbel", "gumbel_alpha", "gumbel_lambdas", "gumbel_plot_lo", "gumbel_plot_hi", "bound_variance", "bound_alpha", "bound_sizes",
      "bound_resamples", "convexity", "convexity_alpha", "convexity_lambda", "out"};
  for (const auto& [key, value] : j.items())
    if (std::find(known.begin(), known.end(), key) == known.end())
      throw ConfigError("verify config: unknown key '" + key + "'");
  VerifyConfig c;
  read(j, "seed", c.seed);
  read(j, "exactness", c.exactness);
  read(j, "exactness_datasets", c.exactness_datasets);
  read(j, "exactness_sizes", c.exactness_sizes);
  read(j, "exactness_alphas", c.exactness_alphas);
  read(j, "exactness_lambdas", c.exactness_lambdas);
  read(j, "variance", c.variance);
  read(j, "variance_n", c.variance_n);
  read(j, "variance_resamples", c.variance_resamples);
  read(j, "variance_alpha", c.variance_alpha);
  read(j, "gumbel", c.gumbel);
  read(j, "gumbel_alpha", c.gumbel_alpha);
  read(j, "gumbel_lambdas", c.gumbel_lambdas);
  read(j, "gumbel_plot_lo", c.gumbel_plot_lo);
  read(j, "gumbel_plot_hi", c.gumbel_plot_hi);
  read(j, "bound_variance", c.bound_variance);
  read(j, "bound_alpha", c.bound_alpha);
  read(j, "bound_sizes", c.bound_sizes);
  read(j, "bound_resamples", c.bound_resamples);
  read(j, "convexity", c.convexity);
  read(j, "convexity_alpha", c.convexity_alpha);
  read(j, "convexity_lambda", c.convexity_lambda);
  return c;
}

std::string to_json(const VerifyConfig& c) {
  return json{{"seed", c.seed},
              {"exactness", c.exactness},
              {"exactness_datasets", c.exactness_datasets},
              {"exactness_sizes", c.exactness_sizes},
              {"exactness_alphas", c.exactness_alphas},
              {"exactness_lambdas", c.exactness_lambdas},
              {"variance", c.variance},
              {"variance_n", c.variance_n},
              {"variance_resamples", c.variance_resamples},
              {"variance_alpha", c.variance_alpha},
              {"gumbel", c.gumbel},
              {"gumbel_alpha", c.gumbel_alpha},
              {"gumbel_lambdas", c.gumbel_lambdas},
              {"gumbel_plot_lo", c.gumbel_plot_lo},
              {"gumbel_plot_hi", c.gumbel_plot_hi},
              {"bound_variance", c.bound_variance},
              {"bound_alpha", c.bound_alpha},
              {"bound_sizes", c.bound_sizes},
              {"bound_resamples", c.bound_resamples},
              {"convexity", c.convexity},
              {"convexity_alpha", c.convexity_alpha},
              {"convexity_lambda", c.convexity_lambda}}
      .dump(2);
}

std::vector<CheckOutcome> run_verify(const VerifyConfig& c, std::size_t jobs) {
  std::vector<CheckOutcome> out;

  if (c.exactness) {
    out.push_back(exactness_check(c, false));
    out.push_back(exactness_check(c, true));
  }

  if (c.variance) {
    data::SyntheticSpec gauss;
    const VarianceCheck v = variance_bound_check(gauss, c.variance_alpha, c.variance_n,
                                                 c.variance_resamples, c.seed, 0.0, jobs);
    out.push_back(timed("miscoverage_variance_bound", [&](CheckOutcome& o) {
      o.passed = v.variance_within_bound();
      o.detail = "Var[Q_N] = " + fmt("%.3e", v.variance) + " vs 1/(4N) = " + fmt("%.3e", v.bound) +
                 " (+3 SE = " + fmt("%.3e", 3 * v.variance_se) + ")";
      o.record = variance_json(v).dump();
    }));
    out.push_back(timed("miscoverage_mean_zero", [&](CheckOutcome& o) {
      o.passed = v.mean_within_noise();
      o.detail = "mean signed gap = " + fmt("%.5f", v.mean_gap) + " vs 2 SE = " +
                 fmt("%.5f", 2 * v.mean_gap_se);
      o.record = variance_json(v).dump();
    }));
  }

  if (c.gumbel) {
    out.push_back(timed("gumbel_closed_form", [&](CheckOutcome& o) {
      const double a = c.gumbel_alpha;
      const double limit = gumbel_mu_l_limit(a);
      double worst = 0.0;
      for (int k = 0; k <= 400; ++k) {
        const double x = limit - 6.0 + (6.0 - 1e-3) * k / 400.0;
        worst = std::max(worst, std::abs(gumbel_cdf(gumbel_upper(a, x)) - gumbel_cdf(x) - a));
      }
      bool increasing = true;
      double prev_w = -1.0;
      for (int k = 0; k <= 200; ++k) {
        const double x = c.gumbel_plot_lo + (c.gumbel_plot_hi - c.gumbel_plot_lo) * k / 200.0;
        const double w = gumbel_width(a, x);
        if (k > 0 && !(w > prev_w)) increasing = false;
        prev_w = w;
      }
      const double mass = gumbel_density_mass();
      o.passed = worst <= 1e-10 && increasing && std::abs(mass - 1.0) <= 1e-9;
      o.detail = "max coverage error " + fmt("%.1e", worst) + ", density mass - 1 = " +
                 fmt("%.1e", mass - 1.0) + (increasing ? ", width increasing" : ", width NOT increasing");
      o.record = json{{"alpha", a}, {"max_coverage_error", worst},
                      {"width_window", {c.gumbel_plot_lo, c.gumbel_plot_hi}}, {"density_mass", mass},
                      {"width_increasing", increasing}}.dump();
    }));
    out.push_back(timed("gumbel_minimizers", [&](CheckOutcome& o) {
      const double a = c.gumbel_alpha;
      const GumbelMinimum rqr = gumbel_argmin(losses::LossFamily::RQR, a, 0.0);
      json sweep = json::array();
      bool ordered = true;
      double closest = 0.0, closest_gap = 1e9;
      for (double l : c.gumbel_lambdas) {
        const GumbelMinimum w = gumbel_argmin(losses::LossFamily::RQR_W, a, l);
        ordered = ordered && w.mu_l < rqr.mu_l && w.width < rqr.width;
        if (std::abs(w.mu_l + 1.2) < closest_gap) {
          closest_gap = std::abs(w.mu_l + 1.2);
          closest = l;
        }
        sweep.push_back({{"lambda", l}, {"mu_l", w.mu_l}, {"width", w.width}, {"loss", w.expected_loss}});
      }
      o.passed = std::abs(rqr.mu_l + 0.9) <= 0.15 && ordered;
      o.detail = "RQR mu_l* = " + fmt("%.4f", rqr.mu_l) + " (width " + fmt("%.3f", rqr.width) +
                 "); lambda closest to mu_l* = -1.2 is " + fmt("%g", closest);
      o.record = json{{"alpha", a}, {"rqr", {{"mu_l", rqr.mu_l}, {"width", rqr.width}, {"loss", rqr.expected_loss}}},
                      {"rqr_w", sweep}, {"lambda_reproducing_minus_1_2", closest}}.dump();
    }));
  }

  if (c.bound_variance) {
    out.push_back(timed("bound_variance_lognormal", [&](CheckOutcome& o) {
      data::SyntheticSpec ln;
      ln.kind = data::NoiseKind::lognormal;
      ln.log_mu = 0.35;
      ln.log_sigma = 1.5;
      const auto rows = bound_variance_experiment(ln, c.bound_alpha, c.bound_sizes,
                                                  c.bound_resamples, c.seed, jobs);
      bool ok = !rows.empty();
      json arr = json::array();
      std::string detail;
      for (const auto& r : rows) {
        ok = ok && r.symmetric_upper.variance > r.min_width_upper.variance;
        arr.push_back({{"size", r.size},
                       {"symmetric_upper_variance", r.symmetric_upper.variance},
                       {"min_width_upper_variance", r.min_width_upper.variance},
                       {"symmetric_lower_variance", r.symmetric_lower.variance},
                       {"min_width_lower_variance", r.min_width_lower.variance},
                       {"symmetric_width_mean", r.symmetric_width.mean},
                       {"min_width_width_mean", r.min_width_width.mean}});
        if (!detail.empty()) detail += "; ";
        detail += "N=" + std::to_string(r.size) + ": " + fmt("%.3g", r.symmetric_upper.variance) +
                  " vs " + fmt("%.3g", r.min_width_upper.variance);
      }
      o.passed = ok;
      o.detail = "upper-bound variance symmetric vs min-width: " + detail;
      o.record = json{{"alpha", c.bound_alpha}, {"resamples", c.bound_resamples},
                      {"seed", c.seed}, {"rows", arr}}.dump();
    }));
  }

  if (c.convexity) {
    out.push_back(timed("convexity_probe", [&](CheckOutcome& o) {
      const ConvexityProbe stated = convexity_probe(c.convexity_alpha, c.convexity_lambda, -2.0, 2.0);
      const ConvexityProbe half = convexity_probe(c.convexity_alpha, 0.5 * c.convexity_alpha, -2.0, 2.0);
      o.passed = stated.min_lambda_minus_resolved >= 0.0 && half.min_lambda_minus >= 0.0;
      o.detail = "threshold " + fmt("%.4f", stated.threshold) + ", lambda " +
                 fmt("%g", stated.lambda) + ": min lambda_- " + fmt("%.4f", stated.min_lambda_minus) +
                 " overall, " + fmt("%.4f", stated.min_lambda_minus_resolved) +
                 " where alpha - P <= lambda; lambda = alpha/2 gives " + fmt("%.4f", half.min_lambda_minus);
      o.record = json{{"alpha", stated.alpha}, {"lambda", stated.lambda}, {"threshold", stated.threshold},
                      {"min_lambda_minus", stated.min_lambda_minus},
                      {"argmin", {stated.argmin_mu1, stated.argmin_mu2}},
                      {"min_lambda_minus_resolved", stated.min_lambda_minus_resolved},
                      {"negative_points", stated.negative_points},
                      {"grid_points", stated.grid_points},
                      {"min_true_eigenvalue", stated.min_true_eigenvalue},
                      {"half_alpha_min_lambda_minus", half.min_lambda_minus}}.dump();
    }));
  }
  return out;
}

std::string verify_report_json(const VerifyConfig& config, const std::vector<CheckOutcome>& checks) {
  json arr = json::array();
  for (const auto& c : checks)
    arr.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail},
                   {"record", json::parse(c.record)}});
  return json{{"config", json::parse(to_json(config))}, {"checks", arr}}.dump(2);
}

}  // namespace ik::oracle
