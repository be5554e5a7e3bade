#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "intervalkit/core/errors.hpp"
#include "intervalkit/core/rng.hpp"
#include "intervalkit/data/synthetic.hpp"
#include "intervalkit/oracle/bound_variance.hpp"
#include "intervalkit/oracle/brute_force.hpp"
#include "intervalkit/oracle/convexity.hpp"
#include "intervalkit/oracle/coverage_variance.hpp"
#include "intervalkit/oracle/gumbel.hpp"
#include "intervalkit/oracle/numerics.hpp"
#include "intervalkit/oracle/report.hpp"

using namespace ik;
using namespace ik::oracle;
using losses::LossConfig;
using losses::LossFamily;
using doctest::Approx;

TEST_CASE("quadrature and golden section") {
  const auto q = adaptive_simpson([](double x) { return std::exp(-x * x); }, -10, 10, 1e-12);
  CHECK(q.value == Approx(std::sqrt(M_PI)).epsilon(1e-11));
  const auto m = golden_section([](double x) { return (x - 0.3) * (x - 0.3); }, -1, 2, 1e-8);
  CHECK(m.x == Approx(0.3).epsilon(1e-7));
  const std::vector<double> s{1, 2, 3, 4};
  CHECK(quantile_sorted(s.data(), s.size(), 0.5) == 2.5);
  CHECK(quantile_sorted(s.data(), s.size(), 0.0) == 1.0);
  CHECK(quantile_sorted(s.data(), s.size(), 1.0) == 4.0);
}

TEST_CASE("brute-force minimizers cover exactly alpha N points") {
  const std::vector<double> five{1, 2, 3, 4, 5};
  auto r = brute_force_minimize({LossFamily::RQR, 0.8}, five, default_grid(five));
  CHECK(r.covered == 4);
  CHECK(r.empirical_coverage == Approx(0.8));

  const std::vector<double> two{1, 2};
  r = brute_force_minimize({LossFamily::RQR, 0.5}, two, default_grid(two));
  CHECK(r.covered == 1);

  Rng rng(10);
  std::vector<double> ten(10);
  for (double& v : ten) v = rng.uniform();
  r = brute_force_minimize({LossFamily::RQR_W, 0.8, 0.05}, ten, default_grid(ten));
  CHECK(r.covered == 8);
  CHECK(r.tied_count_min <= 8);
  CHECK(r.tied_count_max >= 8);
}

TEST_CASE("grid route and exact cell search agree") {
  Rng rng(11);
  for (int rep = 0; rep < 10; ++rep) {
    std::vector<double> s(10);
    for (double& v : s) v = rng.normal();
    for (const LossConfig cfg : {LossConfig{LossFamily::RQR, 0.8}, LossConfig{LossFamily::RQR_W, 0.5, 0.1}}) {
      const auto grid = brute_force_minimize(cfg, s, default_grid(s, 200));
      const auto exact = exact_pair_search(cfg, s);
      CHECK(grid.loss_value == Approx(exact.loss_value).epsilon(1e-6));
      CHECK(grid.covered == exact.covered);
    }
  }
}

TEST_CASE("brute force rejects unusable input") {
  const std::vector<double> s{1, 2, 3};
  CHECK_THROWS_AS(brute_force_minimize({LossFamily::RQR, 0.8}, s, GridSpec{5, 6, 10}), ConfigError);
  CHECK_THROWS_AS(brute_force_minimize({LossFamily::RQR_O, 0.8}, s, default_grid(s)), ConfigError);
}

TEST_CASE("miscoverage variance") {
  data::SyntheticSpec gauss;
  const auto v = variance_bound_check(gauss, 0.8, 100, 200, 42);
  CHECK(v.variance_within_bound());
  CHECK(v.mean_within_noise());
  CHECK(v.gaps.size() == 200);

  const auto full = variance_bound_check(gauss, 1.0, 20, 50, 1);
  CHECK(full.variance == 0.0);
  CHECK(full.mean_miscoverage == 0.0);

  // Ten times the sample size: the variance shrinks roughly tenfold.
  const auto small = variance_bound_check(gauss, 0.8, 100, 60, 5);
  const auto large = variance_bound_check(gauss, 0.8, 1000, 60, 5);
  CHECK(large.variance <= small.variance / 10.0 + 3.0 * (large.variance_se + small.variance_se / 10.0));

  CHECK_THROWS_AS(variance_bound_check(gauss, 0.85, 10, 60, 1), ConfigError);
  CHECK_THROWS_AS(variance_bound_check(gauss, 0.8, 100, 10, 1), ConfigError);
}

TEST_CASE("gumbel construction") {
  CHECK(gumbel_density_mass() == Approx(1.0).epsilon(1e-9));
  const double limit = gumbel_mu_l_limit(0.9);
  for (double mu = -4.0; mu < limit - 1e-3; mu += 0.05)
    CHECK(std::abs(gumbel_cdf(gumbel_upper(0.9, mu)) - gumbel_cdf(mu) - 0.9) < 1e-10);
  CHECK_THROWS_AS(gumbel_upper(0.9, limit + 0.01), DomainError);
  double prev = gumbel_width(0.9, -1.3);
  for (double mu = -1.29; mu <= -0.85; mu += 0.01) {
    const double w = gumbel_width(0.9, mu);
    CHECK(w > prev);
    prev = w;
  }
}

TEST_CASE("gumbel minimizers") {
  const auto rqr = gumbel_argmin(LossFamily::RQR, 0.9, 0.0);
  CHECK(std::abs(rqr.mu_l - (-0.9)) <= 0.15);
  // Recomputed independently by scipy quadrature before the build.
  CHECK(rqr.mu_l == Approx(-0.992).epsilon(2e-3));
  for (double lambda : {0.01, 0.05, 0.1}) {
    const auto w = gumbel_argmin(LossFamily::RQR_W, 0.9, lambda);
    CHECK(w.mu_l < rqr.mu_l);
    CHECK(w.width < rqr.width);
  }
  CHECK(gumbel_argmin(LossFamily::RQR_W, 0.9, 0.1).mu_l == Approx(-1.197).epsilon(2e-3));
}

TEST_CASE("bound variance estimators") {
  const std::vector<double> s{1, 2, 3, 4, 5, 6, 7, 8, 9, 30};
  const auto mw = min_width_interval(s, 0.8);
  const auto ex = min_width_interval_exhaustive(s, 0.8);
  CHECK(mw.lower == ex.lower);
  CHECK(mw.upper == ex.upper);
  CHECK(mw.upper - mw.lower == 7.0);
  const auto sym = symmetric_quantile_interval(s, 0.8);
  CHECK(sym.lower == Approx(quantile_sorted(s.data(), s.size(), 0.1)));

  data::SyntheticSpec logn;
  logn.kind = data::NoiseKind::lognormal;
  const std::vector<std::size_t> sizes{100, 1000};
  const auto rows = bound_variance_experiment(logn, 0.8, sizes, 200, 3);
  REQUIRE(rows.size() == 2);
  for (const auto& r : rows) CHECK(r.symmetric_upper.variance > r.min_width_upper.variance);
  CHECK(rows[1].symmetric_upper.variance < rows[0].symmetric_upper.variance);
  CHECK(rows[1].min_width_upper.variance < rows[0].min_width_upper.variance);

  data::SyntheticSpec gauss;
  // Symmetric noise: the min-width window is narrower on every sample by
  // selection, but the gap vanishes as N grows (about N^-0.6).
  const auto g = bound_variance_experiment(gauss, 0.8, sizes, 200, 4);
  CHECK(g[0].width_difference_mean >= 0.0);
  CHECK(g[1].width_difference_mean < g[0].width_difference_mean / 2.0);
  CHECK(g[1].width_difference_mean < 0.02 * g[1].symmetric_width.mean);
}

TEST_CASE("convexity probe") {
  const auto p = convexity_probe(0.8, 0.2, -3, 3, 61);
  CHECK(p.threshold == Approx(std::max(0.0, std::erf(3 / std::sqrt(2.0)) - 0.8)));
  CHECK(p.min_lambda_minus_resolved >= 0.0);
  // Short intervals with lambda < alpha / 2: the literal expression is negative.
  CHECK(p.min_lambda_minus == Approx(-0.4));
  CHECK(p.negative_points > 0);
  const auto half = convexity_probe(0.8, 0.4, -3, 3, 61);
  CHECK(half.min_lambda_minus >= -1e-12);
}

TEST_CASE("verify config parsing") {
  const auto c = verify_config_from_json(R"({"seed": 5, "gumbel": false, "bound_sizes": [10]})");
  CHECK(c.seed == 5);
  CHECK_FALSE(c.gumbel);
  CHECK(c.bound_sizes == std::vector<std::size_t>{10});
  CHECK(verify_config_from_json(to_json(c)).bound_sizes == c.bound_sizes);
  CHECK_THROWS_AS(verify_config_from_json(R"({"typo": 1})"), ConfigError);
  CHECK_THROWS_AS(verify_config_from_json("[1]"), ConfigError);
  CHECK_THROWS_AS(verify_config_from_json(R"({"seed": "x"})"), ConfigError);
}

TEST_CASE("verify suite is idempotent") {
  VerifyConfig c;
  c.exactness_datasets = 3;
  c.variance = false;
  c.bound_resamples = 60;
  c.bound_sizes = {50};
  const auto a = run_verify(c);
  const auto b = run_verify(c);
  REQUIRE(a.size() == b.size());
  for (const auto& o : a) CHECK_MESSAGE(o.passed, o.name << ": " << o.detail);
  CHECK(verify_report_json(c, a) == verify_report_json(c, b));
}
