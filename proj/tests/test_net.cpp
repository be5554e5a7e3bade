#include <cmath>
#include <filesystem>

#include "doctest.h"
#include "intervalkit/core/errors.hpp"
#include "intervalkit/losses/losses.hpp"
#include "intervalkit/net/checkpoint.hpp"
#include "intervalkit/net/mlp.hpp"
#include "support/oracles.hpp"

using namespace ik;
using namespace ik::net;
using doctest::Approx;

namespace {

Matrix random_matrix(std::size_t r, std::size_t c, Rng& rng) {
  Matrix m(r, c);
  for (double& v : m.values()) v = rng.uniform(-1.5, 1.5);
  return m;
}

void set_params(Mlp& m, const std::vector<double>& p) {
  auto w = m.mutable_parameters();
  std::copy(p.begin(), p.end(), w.begin());
}

}  // namespace

TEST_CASE("forward pass basics") {
  Rng rng(1);
  Mlp zero(3, 5, 2);
  const Matrix x = random_matrix(4, 3, rng);
  const Matrix z = zero.predict(x);
  for (double v : z.values()) CHECK(v == 0.0);

  Mlp unit(1, 1, 1);
  set_params(unit, {1, 0, 1, 0});
  Matrix one(1, 1, 1.0);
  CHECK(unit.predict(one)(0, 0) == 1.0);
  one(0, 0) = -2.0;
  CHECK(unit.predict(one)(0, 0) == 0.0);

  Mlp g = Mlp::glorot(3, 6, 2, 0.0, rng);
  Rng a(5);
  CHECK(g.forward(x, Mode::train, a) == g.predict(x));
  CHECK_THROWS_AS(g.predict(Matrix(2, 4)), StructuralError);
}

TEST_CASE("dropout only acts in train mode") {
  Rng rng(2);
  Mlp g = Mlp::glorot(3, 50, 2, 0.5, rng);
  const Matrix x = random_matrix(8, 3, rng);
  Rng a(9), b(9);
  CHECK(g.forward(x, Mode::train, a) == g.forward(x, Mode::train, b));
  CHECK_FALSE(g.forward(x, Mode::train, a) == g.predict(x));
  Rng untouched(3);
  const Matrix eval = g.forward(x, Mode::eval, untouched);
  CHECK(untouched.uniform() == Rng(3).uniform());
  CHECK(eval == g.predict(x));
}

TEST_CASE("glorot ranges") {
  Rng rng(3);
  const Mlp g = Mlp::glorot(4, 10, 2, 0.0, rng);
  const double a1 = std::sqrt(6.0 / 14.0), a2 = std::sqrt(6.0 / 12.0);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 10; ++j) CHECK(std::abs(g.w1(i, j)) <= a1);
  for (std::size_t j = 0; j < 10; ++j) {
    CHECK(std::abs(g.b1(j)) <= 0.5);
    for (std::size_t k = 0; k < 2; ++k) CHECK(std::abs(g.w2(j, k)) <= a2);
  }
  CHECK(g.b2(0) != g.b2(1));
  CHECK_THROWS_AS(Mlp(0, 3, 2), ConfigError);
  CHECK_THROWS_AS(Mlp(2, 3, 2, 1.0), ConfigError);
}

TEST_CASE("backward basics") {
  Rng rng(4);
  Mlp g = Mlp::glorot(3, 5, 2, 0.0, rng);
  const Matrix x = random_matrix(6, 3, rng);
  ForwardCache cache;
  g.forward(x, Mode::train, rng, &cache);
  for (double v : g.backward(cache, Matrix(6, 2))) CHECK(v == 0.0);

  // Linear unit, squared error: d/dw (w x + b - y)^2 = 2 (yhat - y) x.
  Mlp lin(1, 0, 1);
  set_params(lin, {0.7, 0.2});
  Matrix xi(1, 1, 3.0);
  ForwardCache c2;
  const double yhat = lin.forward(xi, Mode::train, rng, &c2)(0, 0);
  CHECK(yhat == Approx(2.3));
  Matrix go(1, 1, 2.0 * (yhat - 1.0));
  const auto grad = lin.backward(c2, go);
  CHECK(grad[0] == Approx(2.0 * 1.3 * 3.0));
  CHECK(grad[1] == Approx(2.0 * 1.3));

  g.mutable_parameters();
  CHECK_THROWS_AS(g.backward(cache, Matrix(6, 2)), UsageError);
  CHECK_THROWS_AS(g.backward(ForwardCache{}, Matrix(6, 2)), UsageError);
}

namespace {

// Mean RQR loss of the network on (x, y) as a function of the flat parameters.
double network_objective(Mlp model, const std::vector<double>& p, const Matrix& x,
                         const std::vector<double>& y) {
  set_params(model, p);
  const Matrix out = model.predict(x);
  std::vector<Bounds> b(x.rows());
  for (std::size_t r = 0; r < x.rows(); ++r) b[r] = {out(r, 0), out(r, 1)};
  return losses::evaluate_batch({losses::LossFamily::RQR_W, 0.9, 0.1}, b, y).loss;
}

}  // namespace

TEST_CASE("network gradients match central differences") {
  for (std::size_t hidden : {8u, 0u}) {
    CAPTURE(hidden);
    Rng rng(12 + hidden);
    Mlp model = Mlp::glorot(4, hidden, 2, 0.0, rng);
    const Matrix x = random_matrix(16, 4, rng);
    std::vector<double> y(16);
    for (double& v : y) v = rng.uniform(-2, 2);

    ForwardCache cache;
    const Matrix out = model.forward(x, Mode::train, rng, &cache);
    std::vector<Bounds> b(16);
    for (std::size_t r = 0; r < 16; ++r) b[r] = {out(r, 0), out(r, 1)};
    const auto e = losses::evaluate_batch({losses::LossFamily::RQR_W, 0.9, 0.1}, b, y);
    Matrix go(16, 2);
    for (std::size_t r = 0; r < 16; ++r) {
      go(r, 0) = e.gradients[r].d_mu1;
      go(r, 1) = e.gradients[r].d_mu2;
    }
    const auto grad = model.backward(cache, go);
    const std::vector<double> p(model.parameters().begin(), model.parameters().end());
    const auto f = [&](const std::vector<double>& q) { return network_objective(model, q, x, y); };
    double worst = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i)
      worst = std::max(worst, testing::relative_error(grad[i], testing::central_difference(f, p, i), 1e-6));
    CHECK(worst < 1e-4);
  }
}

TEST_CASE("adam") {
  Rng rng(5);
  Mlp m = Mlp::glorot(2, 3, 2, 0.0, rng);
  const std::vector<double> before(m.parameters().begin(), m.parameters().end());
  AdamState s = AdamState::for_model(m, 0.01);
  adam_step(m, std::vector<double>(m.parameter_count(), 0.0), s);
  CHECK(std::equal(before.begin(), before.end(), m.parameters().begin()));

  Mlp m2 = Mlp::glorot(2, 3, 2, 0.0, rng);
  const std::vector<double> start(m2.parameters().begin(), m2.parameters().end());
  AdamState s2 = AdamState::for_model(m2, 0.01);
  std::vector<double> g(m2.parameter_count());
  for (std::size_t i = 0; i < g.size(); ++i) g[i] = (i % 2 ? 1.0 : -1.0) * (0.1 + static_cast<double>(i));
  adam_step(m2, g, s2);
  for (std::size_t i = 0; i < g.size(); ++i)
    CHECK(m2.parameters()[i] - start[i] == Approx(-0.01 * (g[i] > 0 ? 1 : -1)).epsilon(1e-6));

  // Constant gradient: every step moves the same way by at most lr (1 + tol).
  std::vector<double> prev(m2.parameters().begin(), m2.parameters().end());
  for (int t = 0; t < 200; ++t) {
    adam_step(m2, g, s2);
    for (std::size_t i = 0; i < g.size(); ++i) {
      const double step = m2.parameters()[i] - prev[i];
      CHECK(step * g[i] < 0.0);
      CHECK(std::abs(step) <= 0.01 * (1 + 1e-6));
      prev[i] = m2.parameters()[i];
    }
  }
  CHECK_THROWS_AS(adam_step(m2, std::vector<double>(3), s2), StructuralError);
}

TEST_CASE("swap_outputs exchanges the heads") {
  Rng rng(6);
  for (std::size_t hidden : {4u, 0u}) {
    Mlp m = Mlp::glorot(3, hidden, 2, 0.0, rng);
    const Matrix x = random_matrix(5, 3, rng);
    const Matrix before = m.predict(x);
    m.swap_outputs();
    const Matrix after = m.predict(x);
    for (std::size_t r = 0; r < 5; ++r) {
      CHECK(after(r, 0) == before(r, 1));
      CHECK(after(r, 1) == before(r, 0));
    }
  }
  Mlp one(2, 2, 1);
  CHECK_THROWS_AS(one.swap_outputs(), UsageError);
}

TEST_CASE("checkpoint round trip") {
  Rng rng(7);
  Checkpoint ck;
  ck.model = Mlp::glorot(3, 4, 2, 0.1, rng);
  ck.preprocessing = {true, {1.5, -2, 0.25}, {1, 3, 0.5}, 7.25, true};
  ck.loss = {losses::LossFamily::RQR_W, 0.8, 0.05};
  ck.method = "RQR-W";
  const std::string text = to_json(ck);
  const Checkpoint back = checkpoint_from_json(text);
  CHECK(back.model == ck.model);
  CHECK(back.preprocessing == ck.preprocessing);
  CHECK(back.loss.family == ck.loss.family);
  CHECK(back.loss.lambda == ck.loss.lambda);
  CHECK(back.method == "RQR-W");
  CHECK(to_json(back) == text);

  const auto path = std::filesystem::temp_directory_path() / "intervalkit_test_checkpoint.json";
  save_checkpoint(ck, path);
  CHECK(load_checkpoint(path).model == ck.model);
  std::filesystem::remove(path);

  CHECK_THROWS_AS(checkpoint_from_json("{"), ParseError);
  CHECK_THROWS_AS(checkpoint_from_json("{\"format\": \"other\"}"), ConfigError);
  CHECK_THROWS_AS(load_checkpoint("/nonexistent/ck.json"), IoError);
}
