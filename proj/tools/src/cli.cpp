#include "intervalkit/cli/cli.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "intervalkit/bench/experiment.hpp"
#include "intervalkit/bench/report.hpp"
#include "intervalkit/core/errors.hpp"
#include "intervalkit/core/task_pool.hpp"
#include "intervalkit/data/csv.hpp"
#include "intervalkit/data/preprocess.hpp"
#include "intervalkit/net/checkpoint.hpp"
#include "intervalkit/oracle/report.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace ik::cli {

namespace {

constexpr const char* kSeedEnv = "INTERVALKIT_SEED";

struct Options {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::size_t jobs = 0;
  bool verbose = false;
};

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file '" + path.string() + "'");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_file(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << text;
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

std::uint64_t parse_seed(const std::string& text, const char* source) {
  std::uint64_t v = 0;
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc{} || ptr != end || text.empty())
    throw ConfigError(std::string(source) + ": '" + text + "' is not an unsigned 64-bit seed");
  return v;
}

// Config text with the seed resolved: --seed beats the config's "seed",
// which beats INTERVALKIT_SEED. Returns the original text when nothing changes.
std::string resolve_seed(const std::string& text, const Options& opt, bool has_seed_key) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config: expected a JSON object");
  if (!has_seed_key) return j.dump();
  if (opt.seed) {
    j["seed"] = *opt.seed;
  } else if (!j.contains("seed")) {
    if (const char* env = std::getenv(kSeedEnv); env && *env) j["seed"] = parse_seed(env, kSeedEnv);
  }
  return j.dump();
}

fs::path out_dir(const Options& opt, const std::string& config_text, const char* fallback) {
  if (!opt.out.empty()) return opt.out;
  const json j = json::parse(config_text);
  if (j.contains("out") && j.at("out").is_string()) return j.at("out").get<std::string>();
  return fallback;
}

fs::path config_dir(const Options& opt) {
  const fs::path p = fs::path(opt.config).parent_path();
  return p.empty() ? fs::path(".") : p;
}

void log_config(std::ostream& err, const char* verb, const std::string& resolved) {
  err << "[intervalkit] " << verb << " config:\n" << resolved << '\n';
}

std::string eval_json(const metrics::EvalReport& r) {
  return json{{"picp", r.picp}, {"mpiw", r.mpiw}, {"wcpc", r.wcpc}, {"hsic", r.hsic}, {"n", r.n},
              {"wcpc_degenerate", r.wcpc_degenerate}}
      .dump();
}

int cmd_synth(const Options& opt, std::ostream& out, std::ostream& err) {
  const std::string text = resolve_seed(read_file(opt.config), opt, true);
  json j = json::parse(text);
  const std::uint64_t seed = j.value("seed", std::uint64_t{0});
  const data::SyntheticSpec spec = bench::synthetic_spec_from_json(text);
  bench::ExperimentConfig echo;
  echo.datasets.push_back(bench::DatasetSource{true, spec, {}, {}});
  const json resolved = {{"seed", seed},
                         {"synthetic", json::parse(bench::to_json(echo))["datasets"][0]["synthetic"]}};
  log_config(err, "synth", resolved.dump(2));
  fs::path path = out_dir(opt, text, ".");
  if (path.extension() != ".csv") path /= spec.name + ".csv";
  const Dataset ds = data::generate(spec, seed);
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  data::save_csv(ds, path);
  out << path.string() << '\n';
  return kOk;
}

int cmd_train(const Options& opt, std::ostream& out, std::ostream& err) {
  const std::string text = resolve_seed(read_file(opt.config), opt, true);
  const bench::TrainJob job = bench::train_job_from_json(text, config_dir(opt));
  log_config(err, "train", bench::to_json(job));
  const Dataset raw = bench::load_source(job.dataset, job.seed, 0);
  auto [ds, split] = data::preprocess_and_split(raw, job.split, bench::split_seed(job.seed));
  bench::TrainConfig cfg = job.train;
  cfg.seed = bench::train_seed(job.seed);
  const bench::TrainResult result = bench::train(ds, split, cfg);
  const metrics::EvalReport val = bench::evaluate_rows(result, cfg.method, ds, split.val);
  const metrics::EvalReport test = bench::evaluate_rows(result, cfg.method, ds, split.test);

  const fs::path dir = out_dir(opt, text, "intervalkit-train");
  net::Checkpoint ck{result.model, ds.preprocessing, cfg.loss(), std::string(to_string(cfg.method)),
                     result.quantiles};
  fs::create_directories(dir);
  net::save_checkpoint(ck, dir / "checkpoint.json");
  json trace = json::array();
  for (const auto& t : result.trace)
    trace.push_back({{"epoch", t.epoch}, {"train_loss", t.train_loss}, {"val_loss", t.val_loss},
                     {"val_picp", t.val_picp}, {"val_mpiw", t.val_mpiw}});
  const json report = {{"dataset", raw.name},
                       {"method", to_string(cfg.method)},
                       {"best_epoch", result.best_epoch},
                       {"qualified", result.qualified},
                       {"stopped_early", result.stopped_early},
                       {"validation", json::parse(eval_json(val))},
                       {"test", json::parse(eval_json(test))}};
  write_file(dir / "eval.json", report.dump(2) + "\n");
  write_file(dir / "trace.json", trace.dump() + "\n");
  out << report.dump(2) << '\n';
  if (opt.verbose)
    err << "[intervalkit] best epoch " << result.best_epoch << " of " << result.trace.size() << '\n';
  return kOk;
}

int cmd_bench(const Options& opt, std::ostream& out, std::ostream& err) {
  const std::string text = resolve_seed(read_file(opt.config), opt, true);
  const bench::ExperimentConfig cfg = bench::experiment_from_json(text, config_dir(opt));
  const std::string resolved = bench::to_json(cfg);
  log_config(err, "bench", resolved);
  const std::size_t jobs = resolve_jobs(opt.jobs);
  const auto t0 = std::chrono::steady_clock::now();
  bench::ProgressLog log;
  if (opt.verbose) log = [&err](const std::string& s) { err << "[intervalkit] " << s << '\n'; };
  bench::ExperimentResult result = bench::run_experiment(cfg, jobs, log);
  const fs::path dir = out_dir(opt, text, "intervalkit-bench");
  bench::ReportBundle bundle;
  bundle.records = result.records;
  bundle.config_json = resolved;
  bundle.bands = std::move(result.bands);
  bundle.plots = cfg.plots;
  bench::emit_report(dir, bundle);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  err << "[intervalkit] bench finished in " << secs << " s (" << jobs << " jobs)\n";
  out << (dir / "results.json").string() << '\n';
  return kOk;
}

int cmd_verify(const Options& opt, std::ostream& out, std::ostream& err) {
  const std::string text = resolve_seed(read_file(opt.config), opt, true);
  const oracle::VerifyConfig cfg = oracle::verify_config_from_json(text);
  log_config(err, "verify", oracle::to_json(cfg));
  const auto checks = oracle::run_verify(cfg, resolve_jobs(opt.jobs));
  bool all = true;
  for (const auto& c : checks) {
    all = all && c.passed;
    out << (c.passed ? "PASS " : "FAIL ") << c.name << ": " << c.detail << '\n';
    if (opt.verbose) err << "[intervalkit] " << c.name << " took " << c.seconds << " s\n";
  }
  const fs::path dir = out_dir(opt, text, "intervalkit-verify");
  write_file(dir / "verify_report.json", oracle::verify_report_json(cfg, checks));
  return all ? kOk : kFailed;
}

int cmd_report(const Options& opt, std::ostream& out, std::ostream& err) {
  const std::string text = read_file(opt.config);
  const auto records = bench::records_from_json(text);
  if (records.empty()) throw ConfigError("report: results file has no records");
  err << "[intervalkit] report: " << records.size() << " records from " << opt.config << '\n';
  bench::ReportBundle bundle;
  bundle.records = records;
  bundle.config_json = bench::config_from_results(text);
  const fs::path dir = opt.out.empty() ? fs::path("intervalkit-report") : fs::path(opt.out);
  bench::emit_report(dir, bundle);
  out << (dir / "summary.md").string() << '\n';
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Prediction-interval toolkit: synthetic data, training, benchmarks and oracle checks",
               "intervalkit"};
  app.require_subcommand(1, 1);
  Options opt;
  std::string seed_text;

  struct Verb {
    const char* name;
    const char* help;
    int (*fn)(const Options&, std::ostream&, std::ostream&);
  };
  const Verb verbs[] = {
      {"synth", "write a synthetic dataset CSV", cmd_synth},
      {"train", "train one model; writes checkpoint.json and eval.json", cmd_train},
      {"bench", "run a benchmark; writes results.json, summary.csv, summary.md, plotdata/", cmd_bench},
      {"verify", "run the oracle suite and print one PASS/FAIL line per check", cmd_verify},
      {"report", "re-render summary files from a results.json (given as --config)", cmd_report},
  };
  std::vector<CLI::App*> subs;
  for (const auto& v : verbs) {
    CLI::App* sub = app.add_subcommand(v.name, v.help);
    sub->add_option("--config", opt.config, "config file (JSON)")->required();
    sub->add_option("--out", opt.out, "output file or directory");
    sub->add_option("--seed", seed_text, "master seed override (u64)");
    sub->add_option("--jobs", opt.jobs, "worker threads (0 = logical cores)");
    sub->add_flag("--verbose", opt.verbose, "progress logs on stderr");
    subs.push_back(sub);
  }

  if (args.size() > 1 && !args[1].empty() && args[1][0] != '-' &&
      std::none_of(std::begin(verbs), std::end(verbs), [&](const Verb& v) { return args[1] == v.name; })) {
    err << "error: unknown verb '" << args[1] << "'\n" << app.help();
    return kConfigError;
  }
  std::vector<std::string> rev(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, err, err);
    err << app.help();
    return kConfigError;
  }

  try {
    if (!seed_text.empty()) opt.seed = parse_seed(seed_text, "--seed");
    for (std::size_t i = 0; i < subs.size(); ++i)
      if (subs[i]->parsed()) return verbs[i].fn(opt, out, err);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kConfigError;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kConfigError;
  } catch (const json::exception& e) {
    err << "error: config: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kFailed;
  }
  return kConfigError;
}

}  // namespace ik::cli
