#include "intervalkit/bench/experiment.hpp"

#include <cmath>
#include <set>

#include "intervalkit/bench/rqr_o_protocol.hpp"
#include "intervalkit/core/errors.hpp"
#include "intervalkit/core/rng.hpp"
#include "intervalkit/data/csv.hpp"
#include "json.hpp"

namespace ik::bench {

namespace {

using nlohmann::json;

// Typed, key-checked access to one JSON object.
class Reader {
 public:
  Reader(const json& j, std::string context) : j_(j), context_(std::move(context)) {
    if (!j_.is_object()) throw ConfigError(context_ + ": expected an object");
  }

  template <class T>
  void get(const char* key, T& out) {
    seen_.insert(key);
    if (!j_.contains(key)) return;
    try {
      out = j_.at(key).get<T>();
    } catch (const json::exception& e) {
      throw ConfigError(context_ + ": bad value for '" + key + "': " + e.what());
    }
  }

  bool has(const char* key) {
    seen_.insert(key);
    return j_.contains(key);
  }
  const json& at(const char* key) const { return j_.at(key); }
  void ignore(const char* key) { seen_.insert(key); }

  void finish() const {
    for (const auto& [key, value] : j_.items())
      if (!seen_.count(key)) throw ConfigError(context_ + ": unknown key '" + key + "'");
  }

 private:
  const json& j_;
  std::string context_;
  std::set<std::string> seen_;
};

json parse(const std::string& text, const char* what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string(what) + ": invalid JSON: " + e.what());
  }
}

SplitRatios split_from(const json& j) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "width") return SplitRatios::width_protocol();
    if (s == "orthogonal") return SplitRatios::orthogonal_protocol();
    throw ConfigError("split: expected \"width\", \"orthogonal\" or [train, val, test]");
  }
  if (!j.is_array() || j.size() != 3 || !j[0].is_number() || !j[1].is_number() ||
      !j[2].is_number())
    throw ConfigError("split: expected \"width\", \"orthogonal\" or [train, val, test]");
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

json split_json(SplitRatios r) { return json::array({r.train, r.val, r.test}); }

void check_split(SplitRatios r, const char* who) {
  if (!(r.train > 0.0 && r.val > 0.0 && r.test > 0.0) ||
      std::abs(r.train + r.val + r.test - 1.0) > 1e-9)
    throw ConfigError(std::string(who) + ": split ratios must be positive and sum to 1");
}

data::SyntheticSpec synthetic_from(const json& j) {
  data::SyntheticSpec s;
  Reader r(j, "synthetic");
  std::string kind(data::to_string(s.kind)), x_mode(data::to_string(s.x_mode));
  r.get("kind", kind);
  r.get("x_mode", x_mode);
  r.get("n", s.n);
  r.get("location", s.location);
  r.get("x_low", s.x_low);
  r.get("x_high", s.x_high);
  r.get("hetero_slope", s.hetero_slope);
  r.get("mean", s.mean);
  r.get("std", s.std);
  r.get("lower", s.lower);
  r.get("upper", s.upper);
  r.get("log_mu", s.log_mu);
  r.get("log_sigma", s.log_sigma);
  r.get("name", s.name);
  r.ignore("verb");
  r.ignore("out");
  r.ignore("seed");
  r.finish();
  s.kind = data::parse_noise_kind(kind);
  s.x_mode = data::parse_x_mode(x_mode);
  s.validate();
  return s;
}

json synthetic_json(const data::SyntheticSpec& s) {
  return {{"kind", data::to_string(s.kind)},
          {"n", s.n},
          {"x_mode", data::to_string(s.x_mode)},
          {"location", s.location},
          {"x_low", s.x_low},
          {"x_high", s.x_high},
          {"hetero_slope", s.hetero_slope},
          {"mean", s.mean},
          {"std", s.std},
          {"lower", s.lower},
          {"upper", s.upper},
          {"log_mu", s.log_mu},
          {"log_sigma", s.log_sigma},
          {"name", s.name}};
}

DatasetSource source_from(const json& j, const std::filesystem::path& base_dir) {
  DatasetSource src;
  Reader r(j, "dataset");
  if (r.has("synthetic") == r.has("csv"))
    throw ConfigError("dataset: give exactly one of 'synthetic' or 'csv'");
  if (j.contains("synthetic")) {
    src.synthetic = true;
    src.spec = synthetic_from(j.at("synthetic"));
  } else {
    src.synthetic = false;
    std::string path;
    r.get("csv", path);
    src.csv = path;
    if (src.csv.is_relative() && !base_dir.empty()) src.csv = base_dir / src.csv;
    r.get("target", src.target);
  }
  r.finish();
  return src;
}

json source_json(const DatasetSource& s) {
  if (s.synthetic) return {{"synthetic", synthetic_json(s.spec)}};
  return {{"csv", s.csv.string()}, {"target", s.target}};
}

std::vector<Method> methods_from(const std::vector<std::string>& names) {
  std::vector<Method> out;
  for (const auto& n : names) out.push_back(parse_method(n));
  return out;
}

}  // namespace

Dataset load_source(const DatasetSource& source, std::uint64_t master_seed, std::size_t index) {
  if (!source.synthetic) return data::load_csv(source.csv, source.target);
  return data::generate(source.spec, mix_seed(master_seed, 1000 + index));
}

std::vector<double> default_lambdas(Method m) {
  switch (m) {
    case Method::RQR_W:
      return {0.01, 0.1, 1.0};
    case Method::IR:
      return {0.01, 0.1, 1.0};
    default:
      return {0.0};
  }
}

HyperGrid full_hyper_grid(Method m) {
  HyperGrid g;
  g.learning_rates = {0.1, 0.01, 0.001, 0.0001};
  g.dropouts = {0.1, 0.2, 0.3};
  g.lambdas = has_regularization(m) ? std::vector<double>{0.01, 0.05, 0.1, 0.5, 1, 5, 10, 50}
                                    : std::vector<double>{0.0};
  return g;
}

void ExperimentConfig::validate() const {
  if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigError("experiment: alpha must lie in (0, 1)");
  if (!(coverage_margin >= 0.0)) throw ConfigError("experiment: coverage_margin must be >= 0");
  if (datasets.empty()) throw ConfigError("experiment: 'datasets' is empty");
  if (methods.empty()) throw ConfigError("experiment: 'methods' is empty");
  if (seeds == 0) throw ConfigError("experiment: 'seeds' must be positive");
  if (batch_size == 0) throw ConfigError("experiment: batch_size must be positive");
  if (learning_rates.empty() || dropouts.empty())
    throw ConfigError("experiment: learning_rates and dropouts must be nonempty");
  for (const auto& [m, l] : lambdas)
    if (l.empty()) throw ConfigError("experiment: empty lambda list for " + std::string(to_string(m)));
  check_split(split, "experiment");
  check_split(rqr_o.split, "experiment rqr_o");
  for (const auto& d : datasets)
    if (d.synthetic) d.spec.validate();
}

HyperGrid ExperimentConfig::grid_for(Method m) const {
  if (full_grid) return full_hyper_grid(m);
  HyperGrid g{learning_rates, dropouts, default_lambdas(m)};
  if (auto it = lambdas.find(m); it != lambdas.end()) g.lambdas = it->second;
  return g;
}

std::vector<std::uint64_t> ExperimentConfig::seed_list() const {
  std::vector<std::uint64_t> out;
  for (std::size_t k = 0; k < seeds; ++k) out.push_back(mix_seed(seed, k));
  return out;
}

data::SyntheticSpec synthetic_spec_from_json(const std::string& text) {
  return synthetic_from(parse(text, "synthetic config"));
}

ExperimentConfig experiment_from_json(const std::string& text,
                                      const std::filesystem::path& base_dir) {
  const json j = parse(text, "experiment config");
  ExperimentConfig c;
  Reader r(j, "experiment config");
  r.ignore("verb");
  r.ignore("out");
  r.get("seed", c.seed);
  r.get("alpha", c.alpha);
  r.get("coverage_margin", c.coverage_margin);
  if (r.has("datasets")) {
    if (!j.at("datasets").is_array()) throw ConfigError("experiment config: 'datasets' must be a list");
    for (const json& d : j.at("datasets")) c.datasets.push_back(source_from(d, base_dir));
  }
  std::vector<std::string> methods;
  r.get("methods", methods);
  c.methods = methods_from(methods);
  r.get("seeds", c.seeds);
  r.get("epochs", c.epochs);
  r.get("batch_size", c.batch_size);
  r.get("hidden", c.hidden);
  r.get("patience", c.patience);
  std::string checkpointing(to_string(c.checkpointing));
  r.get("checkpointing", checkpointing);
  c.checkpointing = parse_checkpointing(checkpointing);
  if (r.has("split")) c.split = split_from(j.at("split"));
  r.get("learning_rates", c.learning_rates);
  r.get("dropouts", c.dropouts);
  std::map<std::string, std::vector<double>> lambdas;
  r.get("lambdas", lambdas);
  for (const auto& [name, values] : lambdas) c.lambdas[parse_method(name)] = values;
  r.get("full_grid", c.full_grid);
  r.get("plots", c.plots);
  if (r.has("rqr_o")) {
    Reader o(j.at("rqr_o"), "experiment config rqr_o");
    o.get("ladder", c.rqr_o.ladder);
    o.get("learning_rate", c.rqr_o.learning_rate);
    o.get("dropout", c.rqr_o.dropout);
    o.get("epochs", c.rqr_o.epochs);
    o.get("batch_size", c.rqr_o.batch_size);
    o.get("patience", c.rqr_o.patience);
    std::string ck(to_string(c.rqr_o.checkpointing));
    o.get("checkpointing", ck);
    c.rqr_o.checkpointing = parse_checkpointing(ck);
    if (o.has("split")) c.rqr_o.split = split_from(j.at("rqr_o").at("split"));
    o.finish();
  }
  r.finish();
  if (c.rqr_o.ladder.empty()) c.rqr_o.ladder = default_orthogonality_ladder();
  c.validate();
  return c;
}

std::string to_json(const ExperimentConfig& c) {
  json datasets = json::array();
  for (const auto& d : c.datasets) datasets.push_back(source_json(d));
  json methods = json::array();
  for (Method m : c.methods) methods.push_back(std::string(to_string(m)));
  json lambdas = json::object();
  for (Method m : c.methods)
    if (has_regularization(m)) lambdas[std::string(to_string(m))] = c.grid_for(m).lambdas;
  json out = {{"seed", c.seed},
              {"alpha", c.alpha},
              {"coverage_margin", c.coverage_margin},
              {"datasets", datasets},
              {"methods", methods},
              {"seeds", c.seeds},
              {"epochs", c.epochs},
              {"batch_size", c.batch_size},
              {"hidden", c.hidden},
              {"patience", c.patience},
              {"checkpointing", to_string(c.checkpointing)},
              {"split", split_json(c.split)},
              {"learning_rates", c.learning_rates},
              {"dropouts", c.dropouts},
              {"lambdas", lambdas},
              {"full_grid", c.full_grid},
              {"plots", c.plots},
              {"rqr_o",
               {{"ladder", c.rqr_o.ladder},
                {"learning_rate", c.rqr_o.learning_rate},
                {"dropout", c.rqr_o.dropout},
                {"epochs", c.rqr_o.epochs},
                {"batch_size", c.rqr_o.batch_size},
                {"patience", c.rqr_o.patience},
                {"checkpointing", to_string(c.rqr_o.checkpointing)},
                {"split", split_json(c.rqr_o.split)}}}};
  return out.dump(2);
}

ExperimentResult run_experiment(const ExperimentConfig& config, std::size_t jobs,
                                const ProgressLog& log) {
  config.validate();
  ExperimentResult out;
  const auto seeds = config.seed_list();
  for (std::size_t di = 0; di < config.datasets.size(); ++di) {
    const Dataset raw = load_source(config.datasets[di], config.seed, di);
    for (Method m : config.methods) {
      if (log) log("dataset " + raw.name + ": " + std::string(to_string(m)));
      RunOptions opt;
      opt.seeds = seeds;
      opt.jobs = jobs;
      opt.base.method = m;
      opt.base.alpha = config.alpha;
      opt.base.coverage_margin = config.coverage_margin;
      opt.base.hidden = config.hidden;
      if (m == Method::RQR_O) {
        const auto& o = config.rqr_o;
        opt.ratios = o.split;
        opt.base.learning_rate = o.learning_rate;
        opt.base.dropout = o.dropout;
        opt.base.epochs = o.epochs;
        opt.base.batch_size = o.batch_size;
        opt.base.patience = o.patience;
        opt.base.checkpointing = o.checkpointing;
        ProtocolResult p = rqr_o_protocol(raw, o.ladder, opt);
        out.bands.push_back({raw.name, p.record.method, std::move(p.band)});
        out.records.push_back(std::move(p.record));
        continue;
      }
      opt.ratios = config.split;
      opt.base.epochs = config.epochs;
      opt.base.batch_size = config.batch_size;
      opt.base.patience = config.patience;
      opt.base.checkpointing = config.checkpointing;
      GridSearchResult g = grid_search(raw, config.grid_for(m), opt);
      if (log)
        for (const auto& cell : g.cells)
          if (cell.failed) log("  cell lr=" + std::to_string(cell.choice.learning_rate) + " failed: " + cell.reason);
      out.bands.push_back({raw.name, g.record.method, std::move(g.band)});
      out.records.push_back(std::move(g.record));
    }
  }
  return out;
}

TrainJob train_job_from_json(const std::string& text, const std::filesystem::path& base_dir) {
  const json j = parse(text, "train config");
  TrainJob t;
  Reader r(j, "train config");
  r.ignore("verb");
  r.ignore("out");
  if (!r.has("dataset")) throw ConfigError("train config: 'dataset' is required");
  t.dataset = source_from(j.at("dataset"), base_dir);
  std::string method(to_string(t.train.method));
  r.get("method", method);
  t.train.method = parse_method(method);
  r.get("alpha", t.train.alpha);
  r.get("lambda", t.train.lambda);
  r.get("epochs", t.train.epochs);
  r.get("batch_size", t.train.batch_size);
  r.get("learning_rate", t.train.learning_rate);
  r.get("dropout", t.train.dropout);
  r.get("hidden", t.train.hidden);
  r.get("patience", t.train.patience);
  r.get("coverage_margin", t.train.coverage_margin);
  std::string checkpointing(to_string(t.train.checkpointing));
  r.get("checkpointing", checkpointing);
  t.train.checkpointing = parse_checkpointing(checkpointing);
  r.get("seed", t.seed);
  if (r.has("split")) t.split = split_from(j.at("split"));
  r.finish();
  check_split(t.split, "train config");
  t.train.validate();
  return t;
}

std::string to_json(const TrainJob& t) {
  json out = {{"dataset", source_json(t.dataset)},
              {"method", std::string(to_string(t.train.method))},
              {"alpha", t.train.alpha},
              {"lambda", t.train.lambda},
              {"epochs", t.train.epochs},
              {"batch_size", t.train.batch_size},
              {"learning_rate", t.train.learning_rate},
              {"dropout", t.train.dropout},
              {"hidden", t.train.hidden},
              {"patience", t.train.patience},
              {"coverage_margin", t.train.coverage_margin},
              {"checkpointing", to_string(t.train.checkpointing)},
              {"seed", t.seed},
              {"split", split_json(t.split)}};
  return out.dump(2);
}

}  // namespace ik::bench
