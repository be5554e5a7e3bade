#include <algorithm>
#include <cmath>
#include <filesystem>
#include <sstream>

#include "doctest.h"
#include "intervalkit/core/errors.hpp"
#include "intervalkit/data/csv.hpp"
#include "intervalkit/data/preprocess.hpp"
#include "intervalkit/data/synthetic.hpp"
#include "support/oracles.hpp"

using namespace ik;
using namespace ik::data;
using doctest::Approx;

namespace {

std::vector<double> noise(const SyntheticSpec& spec, std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> out(n);
  for (double& v : out) v = draw_noise(spec, rng);
  return out;
}

double median(std::vector<double> v) {
  std::nth_element(v.begin(), v.begin() + v.size() / 2, v.end());
  return v[v.size() / 2];
}

// 99% critical value of the two-sample KS statistic.
double ks_critical(std::size_t n, std::size_t m) {
  return 1.63 * std::sqrt(static_cast<double>(n + m) / static_cast<double>(n * m));
}

}  // namespace

TEST_CASE("gaussian noise moments") {
  SyntheticSpec s;
  const auto v = noise(s, 100000, 1);
  CHECK(std::abs(testing::mean_of(v)) < 0.02);
  CHECK(std::abs(std::sqrt(testing::variance_of(v)) - 1.0) < 0.02);
}

TEST_CASE("gumbel noise median") {
  SyntheticSpec s;
  s.kind = NoiseKind::gumbel;
  CHECK(std::abs(median(noise(s, 100000, 2)) - (-std::log(std::log(2.0)))) < 0.02);
  CHECK(noise_cdf(s, -std::log(std::log(2.0))) == Approx(0.5));
}

TEST_CASE("untruncated window reproduces the plain gaussian") {
  SyntheticSpec plain, wide;
  wide.kind = NoiseKind::truncated_gaussian_noise;
  const auto a = noise(plain, 10000, 3), b = noise(wide, 10000, 3);
  CHECK(testing::ks_statistic(a, b) < 0.01);
  CHECK(std::abs(testing::mean_of(b)) < 0.03);
}

TEST_CASE("half-normal truncation") {
  SyntheticSpec s;
  s.kind = NoiseKind::truncated_gaussian_noise;
  s.lower = 0.0;
  const auto v = noise(s, 100000, 4);
  CHECK(*std::min_element(v.begin(), v.end()) >= 0.0);
  CHECK(std::abs(testing::mean_of(v) - std::sqrt(2.0 / M_PI)) < 0.02);
}

TEST_CASE("truncated sampler agrees with a rejection sampler") {
  struct Window {
    double mean, std, lo, hi;
  };
  for (const Window w : {Window{0, 1, 0, 1e9}, Window{0, 1, -0.5, 1.5}, Window{1, 2, 2.5, 4},
                         Window{0, 1, 2.5, 1e9}}) {
    CAPTURE(w.lo);
    CAPTURE(w.hi);
    Rng rng(5);
    std::vector<double> ours(20000);
    for (double& v : ours) v = truncated_gaussian_draw(w.mean, w.std, w.lo, w.hi, rng);
    const auto reference = testing::rejection_truncated_normal(w.mean, w.std, w.lo, w.hi, 20000, 77);
    CHECK(testing::ks_statistic(ours, reference) < ks_critical(20000, 20000));
    for (double v : ours) REQUIRE((v >= w.lo && v <= w.hi));
  }
  Rng rng(1);
  CHECK_THROWS_AS(truncated_gaussian_draw(0, 1, 1, 0, rng), ConfigError);
  CHECK_THROWS_AS(truncated_gaussian_draw(0, 1, 40, 50, rng), ConfigError);
}

TEST_CASE("noise cdf matches the empirical distribution") {
  SyntheticSpec s;
  s.kind = NoiseKind::lognormal;
  const auto v = noise(s, 50000, 6);
  for (double x : {0.5, 1.0, 2.0, 10.0}) {
    const double frac = static_cast<double>(std::count_if(v.begin(), v.end(), [x](double e) { return e <= x; })) / v.size();
    CHECK(std::abs(frac - noise_cdf(s, x)) < 0.01);
  }
}

TEST_CASE("generate is seeded and heteroskedastic on request") {
  SyntheticSpec s;
  s.n = 500;
  s.x_mode = XMode::uniform;
  s.hetero_slope = 3.0;
  const Dataset a = generate(s, 9), b = generate(s, 9), c = generate(s, 10);
  CHECK(a.targets == b.targets);
  CHECK(a.targets != c.targets);
  CHECK(a.feature_count() == 1);
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(std::abs(a.features(i, 0)) <= 1.0);

  SyntheticSpec bad;
  bad.n = 0;
  CHECK_THROWS_AS(generate(bad, 0), ConfigError);
  CHECK_THROWS_AS(parse_noise_kind("cauchy"), ConfigError);
  CHECK(parse_noise_kind(to_string(NoiseKind::gumbel)) == NoiseKind::gumbel);
}

TEST_CASE("csv parsing") {
  std::istringstream in("a,b,y\n1,2,3\n4,5,6\n7,8,9");
  const Dataset d = parse_csv(in, "y");
  CHECK(d.features.rows() == 3);
  CHECK(d.features.cols() == 2);
  CHECK(d.targets == std::vector<double>{3, 6, 9});
  CHECK(d.features(1, 1) == 5);

  std::istringstream trailing("a,b,y\n1,2,3\n4,5,6\n7,8,9\n");
  CHECK(parse_csv(trailing, "y").targets == d.targets);

  std::istringstream middle("a,y,b\n1,2,3\n");
  const Dataset m = parse_csv(middle, "y");
  CHECK(m.targets == std::vector<double>{2});
  CHECK(m.features(0, 1) == 3);

  std::istringstream absent("a,b\n1,2\n");
  CHECK_THROWS_WITH_AS(parse_csv(absent, "y"), doctest::Contains("'y'"), ConfigError);
  std::istringstream ragged("a,y\n1,2\n3\n");
  CHECK_THROWS_AS(parse_csv(ragged, "y"), ParseError);
  std::istringstream text("a,y\n1,abc\n");
  CHECK_THROWS_AS(parse_csv(text, "y"), ParseError);
  CHECK_THROWS_AS(load_csv("/nonexistent/file.csv"), IoError);
}

TEST_CASE("csv round trip") {
  SyntheticSpec s;
  s.n = 50;
  s.x_mode = XMode::uniform;
  const Dataset d = generate(s, 3);
  const auto path = std::filesystem::temp_directory_path() / "intervalkit_test_roundtrip.csv";
  save_csv(d, path);
  const Dataset back = load_csv(path);
  CHECK(back.targets == d.targets);
  CHECK(back.features == d.features);
  std::filesystem::remove(path);
}

TEST_CASE("preprocessing") {
  SyntheticSpec s;
  s.n = 10;
  s.location = 4.0;
  Dataset constant = generate(s, 1);
  auto [pc, split_c] = preprocess_and_split(constant, {0.6, 0.2, 0.2}, 2);
  CHECK(split_c.train.size() == 6);
  CHECK(split_c.val.size() == 2);
  CHECK(split_c.test.size() == 2);
  CHECK(pc.preprocessing.feature_std[0] == 1.0);
  for (std::size_t i = 0; i < pc.size(); ++i) CHECK(pc.features(i, 0) == 0.0);

  std::istringstream in(
      "a,b,y\n1,10,2\n2,30,4\n3,20,6\n4,50,8\n5,40,10\n6,70,12\n7,60,14\n8,90,16\n9,80,18\n10,100,20\n");
  const Dataset raw = parse_csv(in, "y");
  auto [ds, split] = preprocess_and_split(raw, {0.6, 0.2, 0.2}, 4);
  double train_mean_y = 0.0;
  for (std::size_t r : split.train) train_mean_y += raw.targets[r] / 6.0;
  CHECK(ds.preprocessing.target_scale == Approx(train_mean_y));
  for (std::size_t j = 0; j < 2; ++j) {
    double m = 0.0, v = 0.0;
    for (std::size_t r : split.train) m += ds.features(r, j) / 6.0;
    for (std::size_t r : split.train) v += (ds.features(r, j) - m) * (ds.features(r, j) - m) / 6.0;
    CHECK(std::abs(m) < 1e-10);
    CHECK(std::sqrt(v) == Approx(1.0).epsilon(1e-9));
  }
  // Validation and test rows reuse the training statistics.
  const std::size_t r = split.test[0];
  CHECK(ds.features(r, 0) ==
        Approx((raw.features(r, 0) - ds.preprocessing.feature_mean[0]) / ds.preprocessing.feature_std[0]));
  CHECK(ds.preprocessing.invert_target(ds.targets[r]) == Approx(raw.targets[r]));
}
