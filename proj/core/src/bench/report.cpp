#include "intervalkit/bench/report.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>

#include "intervalkit/core/errors.hpp"
#include "intervalkit/oracle/gumbel.hpp"
#include "json.hpp"

namespace ik::bench {

namespace {

using nlohmann::json;

constexpr const char* kFormat = "intervalkit-results";
constexpr int kVersion = 1;

std::string shortest(double v) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return ec == std::errc{} ? std::string(buf, end) : std::string("nan");
}

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

// Dataset and method names become file name parts.
std::string slug(const std::string& s) {
  std::string out;
  for (char c : s) {
    const bool keep = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9');
    out += keep ? c : '_';
  }
  return out.empty() ? "unnamed" : out;
}

json mean_se_json(const MeanSe& m) { return {{"mean", m.mean}, {"se", m.se}}; }

json record_json(const BenchmarkRecord& r) {
  json seeds = json::array();
  for (const auto& e : r.per_seed)
    seeds.push_back({{"picp", e.picp},
                     {"mpiw", e.mpiw},
                     {"wcpc", e.wcpc},
                     {"hsic", e.hsic},
                     {"n", e.n},
                     {"wcpc_degenerate", e.wcpc_degenerate}});
  return {{"dataset", r.dataset},
          {"method", r.method},
          {"alpha", r.alpha},
          {"coverage_margin", r.coverage_margin},
          {"has_winner", r.has_winner},
          {"coverage_obtained", r.coverage_obtained},
          {"note", r.note},
          {"choice",
           {{"learning_rate", r.choice.learning_rate},
            {"dropout", r.choice.dropout},
            {"lambda", r.choice.lambda},
            {"quantiles", r.choice.quantiles}}},
          {"aggregate",
           {{"picp", mean_se_json(r.picp)},
            {"mpiw", mean_se_json(r.mpiw)},
            {"wcpc", mean_se_json(r.wcpc)},
            {"hsic", mean_se_json(r.hsic)}}},
          {"per_seed", seeds}};
}

BenchmarkRecord record_from(const json& j) {
  BenchmarkRecord r;
  r.dataset = j.at("dataset").get<std::string>();
  r.method = j.at("method").get<std::string>();
  r.alpha = j.at("alpha").get<double>();
  r.coverage_margin = j.at("coverage_margin").get<double>();
  r.has_winner = j.at("has_winner").get<bool>();
  r.note = j.value("note", std::string());
  const json& c = j.at("choice");
  r.choice.learning_rate = c.at("learning_rate").get<double>();
  r.choice.dropout = c.at("dropout").get<double>();
  r.choice.lambda = c.at("lambda").get<double>();
  r.choice.quantiles = c.at("quantiles").get<std::vector<double>>();
  for (const json& e : j.at("per_seed")) {
    metrics::EvalReport rep;
    rep.picp = e.at("picp").get<double>();
    rep.mpiw = e.at("mpiw").get<double>();
    rep.wcpc = e.at("wcpc").get<double>();
    rep.hsic = e.at("hsic").get<double>();
    rep.n = e.at("n").get<std::size_t>();
    rep.wcpc_degenerate = e.at("wcpc_degenerate").get<bool>();
    r.per_seed.push_back(rep);
  }
  r.aggregate();
  return r;
}

json parse_results(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("results: ") + e.what(), 0, e.byte);
  }
  if (!j.is_object() || j.value("format", std::string()) != kFormat)
    throw ParseError("results: not an intervalkit results payload", 0, 0);
  return j;
}

std::string width_cell(const BenchmarkRecord& r) {
  if (!r.has_winner || r.per_seed.empty()) return "n/a";
  std::string w = fixed(r.mpiw.mean, 3);
  if (!r.coverage_obtained) w = "~~" + w + "~~";
  return w + " (" + fixed(100.0 * r.picp.mean, 2) + ")";
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << content;
  out.close();
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

std::string gradient_csv(const GradientFieldSpec& spec) {
  std::ostringstream s;
  s << "y,rqr_grad_mu1,rqr_grad_mu2,rqr_step_mu1,rqr_step_mu2,"
       "rqr_w_grad_mu1,rqr_w_grad_mu2,rqr_w_step_mu1,rqr_w_step_mu2\n";
  for (const auto& p : gradient_field(spec))
    s << shortest(p.y) << ',' << shortest(p.rqr.d_mu1) << ',' << shortest(p.rqr.d_mu2) << ','
      << shortest(-p.rqr.d_mu1) << ',' << shortest(-p.rqr.d_mu2) << ','
      << shortest(p.rqr_w.d_mu1) << ',' << shortest(p.rqr_w.d_mu2) << ','
      << shortest(-p.rqr_w.d_mu1) << ',' << shortest(-p.rqr_w.d_mu2) << '\n';
  return s.str();
}

std::string gumbel_csv(const GumbelPlotSpec& spec) {
  std::ostringstream s;
  s << "family,lambda,mu_l,width,expected_loss\n";
  auto emit = [&](losses::LossFamily f, double lambda) {
    for (const auto& p :
         oracle::gumbel_curve(f, spec.alpha, lambda, spec.mu_l_lo, spec.mu_l_hi, spec.points))
      s << losses::to_string(f) << ',' << shortest(lambda) << ',' << shortest(p.mu_l) << ','
        << shortest(p.width) << ',' << shortest(p.loss) << '\n';
  };
  emit(losses::LossFamily::RQR, 0.0);
  for (double l : spec.lambdas) emit(losses::LossFamily::RQR_W, l);
  return s.str();
}

// Test points ordered by interval centre, as in sorted-band figures.
std::string band_csv(const Band& band) {
  std::vector<std::size_t> order(band.y.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return band.lower[a] + band.upper[a] < band.lower[b] + band.upper[b];
  });
  std::ostringstream s;
  s << "rank,y,lower,upper,covered\n";
  for (std::size_t k = 0; k < order.size(); ++k) {
    const std::size_t i = order[k];
    const bool in = band.lower[i] <= band.y[i] && band.y[i] <= band.upper[i];
    s << k << ',' << shortest(band.y[i]) << ',' << shortest(band.lower[i]) << ','
      << shortest(band.upper[i]) << ',' << (in ? 1 : 0) << '\n';
  }
  return s.str();
}

}  // namespace

std::string results_json(const std::vector<BenchmarkRecord>& records,
                         const std::string& config_json) {
  json recs = json::array();
  for (const auto& r : records) recs.push_back(record_json(r));
  json cfg;
  try {
    cfg = json::parse(config_json);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("results config: ") + e.what(), 0, e.byte);
  }
  json out = {{"format", kFormat}, {"version", kVersion}, {"config", cfg}, {"records", recs}};
  return out.dump(2) + "\n";
}

std::vector<BenchmarkRecord> records_from_json(const std::string& text) {
  const json j = parse_results(text);
  std::vector<BenchmarkRecord> out;
  try {
    for (const json& r : j.at("records")) out.push_back(record_from(r));
  } catch (const json::exception& e) {
    throw ParseError(std::string("results record: ") + e.what(), 0, 0);
  }
  return out;
}

std::string config_from_results(const std::string& text) {
  return parse_results(text).value("config", json::object()).dump();
}

std::string summary_csv(const std::vector<BenchmarkRecord>& records) {
  std::ostringstream s;
  s << "dataset,method,alpha,seeds,picp_mean,picp_se,mpiw_mean,mpiw_se,wcpc_mean,wcpc_se,"
       "hsic_mean,hsic_se,coverage_obtained,has_winner,learning_rate,dropout,lambda,note\n";
  for (const auto& r : records)
    s << csv_field(r.dataset) << ',' << csv_field(r.method) << ',' << shortest(r.alpha) << ','
      << r.per_seed.size() << ',' << shortest(r.picp.mean) << ',' << shortest(r.picp.se) << ','
      << shortest(r.mpiw.mean) << ',' << shortest(r.mpiw.se) << ',' << shortest(r.wcpc.mean)
      << ',' << shortest(r.wcpc.se) << ',' << shortest(r.hsic.mean) << ','
      << shortest(r.hsic.se) << ',' << (r.coverage_obtained ? 1 : 0) << ','
      << (r.has_winner ? 1 : 0) << ',' << shortest(r.choice.learning_rate) << ','
      << shortest(r.choice.dropout) << ',' << shortest(r.choice.lambda) << ','
      << csv_field(r.note) << '\n';
  return s.str();
}

std::string summary_markdown(const std::vector<BenchmarkRecord>& records) {
  std::ostringstream s;
  s << "## Results\n\n"
    << "Width is test MPIW, coverage (in parentheses) is test PICP in percent; means over seeds.\n"
    << "Struck-through widths did not obtain the target coverage.\n\n"
    << "| Dataset | Method | Width (coverage) | Width SE | Coverage SE | WCPC | HSIC |\n"
    << "|---|---|---|---|---|---|---|\n";
  for (const auto& r : records)
    s << "| " << r.dataset << " | " << r.method << " | " << width_cell(r) << " | "
      << fixed(r.mpiw.se, 3) << " | " << fixed(100.0 * r.picp.se, 2) << " | "
      << fixed(r.wcpc.mean, 3) << " | " << fixed(r.hsic.mean, 4) << " |\n";

  std::vector<std::string> datasets, methods;
  std::map<std::pair<std::string, std::string>, const BenchmarkRecord*> cell;
  for (const auto& r : records) {
    if (std::find(datasets.begin(), datasets.end(), r.dataset) == datasets.end())
      datasets.push_back(r.dataset);
    if (std::find(methods.begin(), methods.end(), r.method) == methods.end())
      methods.push_back(r.method);
    cell[{r.dataset, r.method}] = &r;
  }
  s << "\n## Width by dataset\n\n| Dataset |";
  for (const auto& m : methods) s << ' ' << m << " |";
  s << "\n|---|";
  for (std::size_t i = 0; i < methods.size(); ++i) s << "---|";
  s << '\n';
  for (const auto& d : datasets) {
    s << "| " << d << " |";
    for (const auto& m : methods) {
      auto it = cell.find({d, m});
      s << ' ' << (it == cell.end() ? std::string("-") : width_cell(*it->second)) << " |";
    }
    s << '\n';
  }
  return s.str();
}

std::vector<GradientFieldPoint> gradient_field(const GradientFieldSpec& spec) {
  if (spec.points < 2) throw ConfigError("gradient_field needs at least 2 points");
  const double alpha_hat = CoverageTarget::width_corrected(spec.alpha, spec.lambda).alpha_hat;
  std::vector<GradientFieldPoint> out(spec.points);
  const Bounds b{spec.mu1, spec.mu2};
  for (std::size_t k = 0; k < spec.points; ++k) {
    const double y = spec.y_lo + (spec.y_hi - spec.y_lo) * static_cast<double>(k) /
                                     static_cast<double>(spec.points - 1);
    out[k] = {y, losses::rqr_gradient(b, y, spec.alpha),
              losses::rqr_w_gradient(b, y, alpha_hat, spec.lambda)};
  }
  return out;
}

void emit_report(const std::filesystem::path& dir, const ReportBundle& bundle) {
  if (bundle.records.empty()) throw ConfigError("emit_report needs at least one record");
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create '" + dir.string() + "': " + ec.message());
  write_file(dir / "results.json", results_json(bundle.records, bundle.config_json));
  write_file(dir / "summary.csv", summary_csv(bundle.records));
  write_file(dir / "summary.md", summary_markdown(bundle.records));
  if (!bundle.plots) return;
  const auto plots = dir / "plotdata";
  std::filesystem::create_directories(plots, ec);
  if (ec) throw IoError("cannot create '" + plots.string() + "': " + ec.message());
  write_file(plots / "gradient_field.csv", gradient_csv(bundle.gradient));
  write_file(plots / "gumbel_curves.csv", gumbel_csv(bundle.gumbel));
  for (const auto& b : bundle.bands)
    if (!b.band.y.empty())
      write_file(plots / ("bands_" + slug(b.dataset) + "_" + slug(b.method) + ".csv"),
                 band_csv(b.band));
}

}  // namespace ik::bench
