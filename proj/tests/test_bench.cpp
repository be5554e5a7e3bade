#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "intervalkit/bench/experiment.hpp"
#include "intervalkit/bench/grid_search.hpp"
#include "intervalkit/bench/report.hpp"
#include "intervalkit/bench/rqr_o_protocol.hpp"
#include "intervalkit/core/errors.hpp"
#include "intervalkit/data/preprocess.hpp"
#include "intervalkit/data/synthetic.hpp"

using namespace ik;
using namespace ik::bench;
using doctest::Approx;
namespace fs = std::filesystem;

namespace {

Dataset linear_synthetic(std::size_t n = 1000, std::uint64_t seed = 1) {
  data::SyntheticSpec s;
  s.name = "linear";
  s.n = n;
  s.x_mode = data::XMode::uniform;
  s.mean = 5.0;
  return data::generate(s, seed);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// A small experiment whose results.json is frozen under tests/golden.
ExperimentConfig golden_config() {
  ExperimentConfig c;
  c.seed = 5;
  c.seeds = 2;
  c.epochs = 25;
  c.hidden = 8;
  c.learning_rates = {1e-2};
  c.dropouts = {0.0};
  c.lambdas[Method::RQR_W] = {0.1};
  DatasetSource d;
  d.spec.name = "golden";
  d.spec.n = 300;
  d.spec.x_mode = data::XMode::uniform;
  d.spec.hetero_slope = 1.0;
  d.spec.mean = 3.0;
  c.datasets = {d};
  c.methods = {Method::QR, Method::RQR, Method::RQR_W};
  return c;
}

BenchmarkRecord record_with(std::string dataset, std::string method, std::vector<double> picps,
                            std::vector<double> widths) {
  BenchmarkRecord r;
  r.dataset = std::move(dataset);
  r.method = std::move(method);
  for (std::size_t i = 0; i < picps.size(); ++i) {
    metrics::EvalReport e;
    e.picp = picps[i];
    e.mpiw = widths[i];
    e.n = 100;
    r.per_seed.push_back(e);
  }
  r.aggregate();
  return r;
}

}  // namespace

TEST_CASE("train edge cases") {
  const Dataset raw = linear_synthetic(200);
  auto [ds, split] = data::preprocess_and_split(raw, SplitRatios::width_protocol(), 3);
  TrainConfig c;
  c.hidden = 8;
  c.epochs = 0;
  Rng init = Rng(c.seed).derive(0);
  const net::Mlp fresh = net::Mlp::glorot(1, 8, 2, 0.0, init);
  const TrainResult zero = train(ds, split, c);
  CHECK(zero.model == fresh);
  CHECK(zero.best_epoch == 0);
  CHECK(zero.trace.empty());

  c.epochs = 5;
  c.learning_rate = 0.0;
  const TrainResult still = train(ds, split, c);
  CHECK(still.model == fresh);
  for (const auto& t : still.trace) CHECK(t.val_mpiw == still.trace.front().val_mpiw);

  c.method = Method::IR;
  c.lambda = -1.0;
  CHECK_THROWS_AS(train(ds, split, c), ConfigError);
  c = TrainConfig{};
  c.learning_rate = 1e300;
  c.epochs = 20;
  c.method = Method::RQR_W;
  c.lambda = 1e9;
  CHECK_THROWS_AS(train(ds, split, c), NumericError);
}

TEST_CASE("qr training reaches nominal coverage") {
  const Dataset raw = linear_synthetic(2000, 2);
  auto [ds, split] = data::preprocess_and_split(raw, SplitRatios::width_protocol(), 4);
  TrainConfig c;
  c.method = Method::QR;
  c.hidden = 16;
  c.epochs = 300;
  c.learning_rate = 1e-2;
  c.checkpointing = Checkpointing::final_epoch;
  const TrainResult r = train(ds, split, c);
  CHECK(std::abs(evaluate_rows(r, c.method, ds, split.val).picp - 0.9) <= 0.03);
}

TEST_CASE("checkpointing modes") {
  CHECK(parse_checkpointing("final_epoch") == Checkpointing::final_epoch);
  CHECK(to_string(Checkpointing::best_validation_loss) == "best_validation_loss");
  CHECK_THROWS_AS(parse_checkpointing("latest"), ConfigError);

  const Dataset raw = linear_synthetic(400, 3);
  auto [ds, split] = data::preprocess_and_split(raw, SplitRatios::width_protocol(), 5);
  TrainConfig c;
  c.method = Method::RQR;
  c.hidden = 8;
  c.epochs = 30;
  c.learning_rate = 1e-2;
  c.checkpointing = Checkpointing::final_epoch;
  CHECK(train(ds, split, c).best_epoch == 30);
  c.checkpointing = Checkpointing::best_validation_loss;
  const TrainResult r = train(ds, split, c);
  double best = 1e300;
  std::size_t arg = 0;
  for (const auto& t : r.trace)
    if (t.val_loss < best) {
      best = t.val_loss;
      arg = t.epoch;
    }
  CHECK(r.best_epoch == arg);
  CHECK(evaluate_objective(r.model, c, ds, split.val) == Approx(best));
}

TEST_CASE("singleton grid equals a single training run") {
  const Dataset raw = linear_synthetic(300, 4);
  RunOptions o;
  o.base.method = Method::RQR;
  o.base.hidden = 8;
  o.base.epochs = 20;
  o.seeds = {7};
  HyperGrid g;
  g.learning_rates = {1e-2};
  const GridSearchResult res = grid_search(raw, g, o);
  REQUIRE(res.has_winner);

  auto [ds, split] = data::preprocess_and_split(raw, o.ratios, split_seed(7));
  TrainConfig c = o.base;
  c.learning_rate = 1e-2;
  c.seed = train_seed(7);
  const TrainResult r = train(ds, split, c);
  CHECK(res.record.per_seed.at(0) == evaluate_rows(r, c.method, ds, split.test));
}

TEST_CASE("absurd learning rate loses") {
  const Dataset raw = linear_synthetic(600, 5);
  RunOptions o;
  o.base.method = Method::QR;
  o.base.hidden = 8;
  o.base.epochs = 60;
  o.seeds = {1, 2};
  HyperGrid g;
  g.learning_rates = {10.0, 1e-2};
  const GridSearchResult res = grid_search(raw, g, o);
  REQUIRE(res.has_winner);
  CHECK(res.record.choice.learning_rate == 1e-2);
  CHECK(res.cells.size() == 2);
}

TEST_CASE("grid with only failing cells has no winner") {
  const Dataset raw = linear_synthetic(200, 6);
  RunOptions o;
  o.base.method = Method::RQR_W;
  o.base.hidden = 8;
  o.base.epochs = 20;
  HyperGrid g;
  g.learning_rates = {1e300};
  g.lambdas = {1e9};
  const GridSearchResult res = grid_search(raw, g, o);
  CHECK_FALSE(res.has_winner);
  CHECK(res.cells.at(0).failed);
  CHECK(res.record.note.find("every grid cell failed") != std::string::npos);
}

TEST_CASE("aggregate standard error") {
  const auto r = record_with("d", "QR", {0.88, 0.92}, {1.0, 1.4});
  CHECK(r.picp.mean == Approx(0.9));
  // sample std over sqrt(n) = |a - b| / 2 for two seeds
  CHECK(r.mpiw.se == Approx(0.2));
  CHECK(r.picp.se == Approx(0.02));
  CHECK(r.coverage_obtained);
  CHECK(mean_se({3.0}).se == 0.0);
  CHECK(coverage_rule({0.87, 0.01}, 0.9, 0.025));
  CHECK_FALSE(coverage_rule({0.85, 0.01}, 0.9, 0.025));
}

TEST_CASE("orthogonality ladder") {
  const Dataset raw = linear_synthetic(500, 7);
  RunOptions o;
  o.base.method = Method::RQR_O;
  o.base.hidden = 8;
  o.base.epochs = 200;
  o.base.learning_rate = 1e-2;
  o.base.checkpointing = Checkpointing::best_validation_loss;
  o.seeds = {1, 2};
  const ProtocolResult plain = rqr_o_protocol(raw, {0.0}, o);
  CHECK(plain.record.coverage_obtained);
  CHECK(plain.rungs.size() == 1);

  const ProtocolResult one = rqr_o_protocol(raw, {1.0}, o);
  CHECK(one.rungs.size() == 1);
  CHECK(one.record.coverage_obtained == one.rungs[0].coverage_obtained);
  if (!one.record.coverage_obtained) CHECK(one.record.note.find("no ladder rung") != std::string::npos);

  CHECK(default_orthogonality_ladder().front() == 1.0);
  CHECK(default_orthogonality_ladder().back() == 0.0);
  CHECK_THROWS_AS(rqr_o_protocol(raw, {}, o), ConfigError);
  CHECK_THROWS_AS(rqr_o_protocol(raw, {0.1, 0.5}, o), ConfigError);
  CHECK_THROWS_AS(rqr_o_protocol(raw, {-1.0}, o), ConfigError);
  o.base.method = Method::RQR;
  CHECK_THROWS_AS(rqr_o_protocol(raw, {1.0}, o), ConfigError);
}

TEST_CASE("summary emission") {
  const auto ok = record_with("syn", "QR", {0.9, 0.9}, {1.0, 1.2});
  const auto bad = record_with("syn", "RQR", {0.6, 0.62}, {0.5, 0.5});
  const std::string csv = summary_csv({ok});
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 2);
  const std::string md = summary_markdown({ok, bad});
  CHECK(md.find("~~0.500~~") != std::string::npos);
  CHECK(md.find("| syn | QR | 1.100 (90.00)") != std::string::npos);

  const std::string json = results_json({ok, bad}, R"({"seed": 3})");
  const auto back = records_from_json(json);
  REQUIRE(back.size() == 2);
  CHECK(back[0] == ok);
  CHECK(back[1] == bad);
  CHECK(results_json(back, config_from_results(json)) == json);
  CHECK_THROWS_AS(records_from_json("not json"), ParseError);
}

TEST_CASE("gradient field series") {
  const auto pts = gradient_field({});
  REQUIRE(pts.size() == 301);
  for (const auto& p : pts) {
    if (p.y < 0) {
      CHECK(p.rqr.d_mu1 > 0);
      CHECK(p.rqr.d_mu2 > 0);
    } else if (p.y > 1) {
      CHECK(p.rqr.d_mu1 < 0);
      CHECK(p.rqr.d_mu2 < 0);
    } else if (p.y > 0.05 && p.y < 0.45) {
      // mu1 is the nearer bound
      CHECK(std::abs(p.rqr_w.d_mu2) > std::abs(p.rqr_w.d_mu1));
    }
  }
}

TEST_CASE("experiment config parsing") {
  const auto c = experiment_from_json(R"({
    "seed": 9, "alpha": 0.8, "methods": ["QR", "rqr_w"], "seeds": 3, "hidden": 0,
    "checkpointing": "final_epoch", "split": [0.5, 0.25, 0.25],
    "lambdas": {"RQR-W": [5, 20]},
    "datasets": [{"synthetic": {"kind": "gumbel", "n": 100}}]
  })");
  CHECK(c.seed == 9);
  CHECK(c.methods == std::vector<Method>{Method::QR, Method::RQR_W});
  CHECK(c.grid_for(Method::RQR_W).lambdas == std::vector<double>{5, 20});
  CHECK(c.grid_for(Method::QR).lambdas == std::vector<double>{0.0});
  CHECK(c.split.train == 0.5);
  CHECK(c.seed_list().size() == 3);
  CHECK(c.seed_list() == experiment_from_json(to_json(c)).seed_list());
  CHECK(to_json(experiment_from_json(to_json(c))) == to_json(c));

  CHECK_THROWS_AS(experiment_from_json(R"({"methods": ["QR"], "datasets": [], "epochz": 3})"), ConfigError);
  CHECK_THROWS_AS(experiment_from_json(R"({"methods": ["XQR"]})"), ConfigError);
  CHECK_THROWS_AS(experiment_from_json(R"({"split": [0.5, 0.5, 0.5]})"), ConfigError);
  CHECK_THROWS_AS(experiment_from_json(R"({"datasets": [{"csv": "a.csv", "synthetic": {}}]})"), ConfigError);

  const auto full = full_hyper_grid(Method::RQR_W);
  CHECK(full.learning_rates.size() == 4);
  CHECK(full.lambdas.size() == 8);
}

TEST_CASE("frozen small benchmark") {
  const ExperimentResult r = run_experiment(golden_config(), 1);
  const std::string text = results_json(r.records, to_json(golden_config()));
  const fs::path golden = fs::path(INTERVALKIT_GOLDEN_DIR) / "small_bench_results.json";
  REQUIRE_MESSAGE(fs::exists(golden), "missing " << golden);
  CHECK(text == slurp(golden));
  // Worker count must not change any value.
  CHECK(results_json(run_experiment(golden_config(), 3).records, to_json(golden_config())) == text);
}

TEST_CASE("emit_report writes every artifact") {
  const ExperimentConfig cfg = golden_config();
  ExperimentResult r = run_experiment(cfg, 1);
  const fs::path dir = fs::temp_directory_path() / "intervalkit_test_report";
  fs::remove_all(dir);
  ReportBundle b;
  b.records = r.records;
  b.bands = r.bands;
  b.config_json = to_json(cfg);
  emit_report(dir, b);
  for (const char* f : {"results.json", "summary.csv", "summary.md", "plotdata/gradient_field.csv",
                        "plotdata/gumbel_curves.csv", "plotdata/bands_golden_RQR_W.csv"})
    CHECK_MESSAGE(fs::exists(dir / f), f);
  const std::string md = slurp(dir / "summary.md");
  CHECK(md.find("| golden | QR |") != std::string::npos);
  CHECK(md.find("| golden | RQR |") != std::string::npos);
  CHECK(md.find("| golden | RQR-W |") != std::string::npos);
  fs::remove_all(dir);
  CHECK_THROWS_AS(emit_report(dir, ReportBundle{}), ConfigError);
}
