// Hot paths of training and evaluation: batch losses, the network forward and
// backward passes, and the O(N^2) HSIC estimate.

#include <benchmark/benchmark.h>

#include <vector>

#include "intervalkit/core/rng.hpp"
#include "intervalkit/losses/losses.hpp"
#include "intervalkit/metrics/metrics.hpp"
#include "intervalkit/net/mlp.hpp"

namespace {

using ik::Bounds;
using ik::losses::LossConfig;
using ik::losses::LossFamily;

struct Batch {
  std::vector<Bounds> bounds;
  std::vector<double> y;
};

Batch make_batch(std::size_t n) {
  ik::Rng rng(1);
  Batch b;
  for (std::size_t i = 0; i < n; ++i) {
    const double lo = rng.uniform(-1, 0);
    b.bounds.push_back({lo, lo + rng.uniform(0.5, 2)});
    b.y.push_back(rng.normal());
  }
  return b;
}

void batch_loss(benchmark::State& state, LossConfig cfg) {
  const Batch b = make_batch(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(ik::losses::evaluate_batch(cfg, b.bounds, b.y));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

BENCHMARK_CAPTURE(batch_loss, rqr, LossConfig{LossFamily::RQR, 0.9})->Arg(1024)->Arg(10000);
BENCHMARK_CAPTURE(batch_loss, rqr_w, LossConfig{LossFamily::RQR_W, 0.9, 0.1})->Arg(1024)->Arg(10000);
BENCHMARK_CAPTURE(batch_loss, rqr_o, LossConfig{LossFamily::RQR_O, 0.9, 1.0})->Arg(1024)->Arg(10000);
BENCHMARK_CAPTURE(batch_loss, qr, LossConfig{LossFamily::QR_PINBALL, 0.9})->Arg(1024)->Arg(10000);

void forward_backward(benchmark::State& state) {
  const auto rows = static_cast<std::size_t>(state.range(0));
  const auto hidden = static_cast<std::size_t>(state.range(1));
  ik::Rng rng(2);
  const ik::net::Mlp model = ik::net::Mlp::glorot(10, hidden, 2, 0.1, rng);
  ik::Matrix x(rows, 10);
  for (double& v : x.values()) v = rng.normal();
  const ik::Matrix g(rows, 2, 1.0 / static_cast<double>(rows));
  ik::net::ForwardCache cache;
  for (auto _ : state) {
    benchmark::DoNotOptimize(model.forward(x, ik::net::Mode::train, rng, &cache));
    benchmark::DoNotOptimize(model.backward(cache, g));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(forward_backward)->Args({1024, 64})->Args({10000, 64})->Args({1024, 0});

void hsic(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  ik::Rng rng(3);
  std::vector<double> a(n), b(n);
  for (std::size_t i = 0; i < n; ++i) {
    a[i] = rng.normal();
    b[i] = a[i] + rng.normal();
  }
  for (auto _ : state) benchmark::DoNotOptimize(ik::metrics::hsic(a, b));
}
BENCHMARK(hsic)->Arg(250)->Arg(1000);

}  // namespace

BENCHMARK_MAIN();
