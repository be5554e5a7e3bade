#include <cmath>

#include "doctest.h"
#include "intervalkit/core/errors.hpp"
#include "intervalkit/core/rng.hpp"
#include "intervalkit/metrics/metrics.hpp"
#include "support/oracles.hpp"

using namespace ik;
using namespace ik::metrics;
using doctest::Approx;

namespace {

IntervalBatch batch(std::vector<double> lo, std::vector<double> hi) {
  return IntervalBatch::canonicalize(lo, hi);
}

}  // namespace

TEST_CASE("picp") {
  const auto iv = batch({0, 0}, {1, 1});
  CHECK(picp(iv, std::vector<double>{0.5, 2}) == 0.5);
  CHECK(picp(iv, std::vector<double>{0.5, 0.7}) == 1.0);
  CHECK(picp(iv, std::vector<double>{1.0, 0.0}) == 1.0);
  CHECK_THROWS_AS(picp(IntervalBatch{}, std::vector<double>{}), ConfigError);
  CHECK_THROWS_AS(picp(iv, std::vector<double>{1}), StructuralError);
}

TEST_CASE("mpiw") {
  CHECK(mpiw(batch({0, 0}, {1, 3})) == 2.0);
  CHECK(mpiw(batch({2, 5}, {2, 5})) == 0.0);
  CHECK(mpiw(batch({-1}, {1})) == 2.0);
  const auto shifted = batch({10, 10}, {11, 13});
  CHECK(mpiw(shifted) == 2.0);
  CHECK(mpiw(batch({0, 0}, {3, 9})) == 3.0 * mpiw(batch({0, 0}, {1, 3})));
}

TEST_CASE("width-coverage correlation") {
  // widths 1..4, coverage m = [0, 0, 1, 1]
  const auto iv = batch({0, 0, 0, 0}, {1, 2, 3, 4});
  const std::vector<double> y{5, 5, 1, 1};
  auto c = wcpc(iv, y);
  CHECK(c.value == Approx(0.894427191).epsilon(1e-9));
  CHECK_FALSE(c.degenerate);
  c = wcpc(iv, std::vector<double>{0.5, 0.5, 0.5, 0.5});
  CHECK(c.value == 0.0);
  CHECK(c.degenerate);
  // Widths equal to the indicator pattern: w = m → r = 1.
  const auto bin = batch({0, 0, 0, 0}, {0, 1, 0, 1});
  CHECK(wcpc(bin, std::vector<double>{0.5, 0.5, 7, 0.5}).value == Approx(1.0));
}

TEST_CASE("hsic matches an explicit matrix computation") {
  const std::vector<double> w{0, 0, 1, 1}, m{0, 0, 1, 1};
  const double h = hsic(w, m, {1.0, 1.0});
  // sqrt(tr(KHRH)) / (N - 1), computed with numpy before the build.
  CHECK(h == Approx(0.26231289352491105).epsilon(1e-12));
  CHECK(h == Approx(testing::naive_hsic(w, m, 1.0, 1.0)).epsilon(1e-12));

  Rng rng(3);
  std::vector<double> a(60), b(60);
  for (std::size_t i = 0; i < a.size(); ++i) {
    a[i] = rng.uniform(0, 2);
    b[i] = rng.uniform() < 0.8 ? 1.0 : 0.0;
  }
  CHECK(hsic(a, b, {0.7, 0.4}) == Approx(testing::naive_hsic(a, b, 0.7, 0.4)).epsilon(1e-10));
  const double sa = median_pairwise_distance(a);
  CHECK(hsic(a, b) == Approx(testing::naive_hsic(a, b, sa, 1.0)).epsilon(1e-10));

  CHECK(hsic(a, std::vector<double>(60, 1.0)) == Approx(0.0).epsilon(1e-12));
  CHECK_THROWS_AS(hsic(std::vector<double>{1}, std::vector<double>{1}), ConfigError);
}

TEST_CASE("hsic separates dependent from independent pairs") {
  Rng rng(4);
  const std::size_t n = 2000;
  std::vector<double> w(n), m_indep(n), m_dep(n);
  for (std::size_t i = 0; i < n; ++i) {
    w[i] = rng.uniform(0, 2);
    m_indep[i] = rng.uniform() < 0.5 ? 1.0 : 0.0;
    m_dep[i] = w[i] > 1.0 ? 1.0 : 0.0;
  }
  CHECK(hsic(w, m_indep) * 5.0 < hsic(w, m_dep));
}

TEST_CASE("evaluate fills every field") {
  const auto iv = batch({0, 0, 0, 0}, {1, 2, 3, 4});
  const std::vector<double> y{5, 5, 1, 1};
  const EvalReport r = evaluate(iv, y);
  CHECK(r.n == 4);
  CHECK(r.picp == 0.5);
  CHECK(r.mpiw == 2.5);
  CHECK(r.wcpc == Approx(0.894427191));
  CHECK(r.hsic > 0.0);
  const EvalReport single = evaluate(batch({0}, {1}), std::vector<double>{0.5});
  CHECK(single.picp == 1.0);
  CHECK(single.wcpc == 0.0);
}
