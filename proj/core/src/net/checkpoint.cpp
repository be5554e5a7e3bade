#include "intervalkit/net/checkpoint.hpp"

#include <fstream>
#include <sstream>

#include "intervalkit/core/errors.hpp"
#include "json.hpp"

namespace ik::net {

using nlohmann::json;

std::string to_json(const Checkpoint& c) {
  const auto params = c.model.parameters();
  json j;
  j["format"] = "intervalkit-checkpoint";
  j["version"] = Checkpoint::kFormatVersion;
  j["method"] = c.method;
  j["model"] = {{"inputs", c.model.inputs()},
                {"hidden", c.model.hidden()},
                {"outputs", c.model.outputs()},
                {"dropout", c.model.dropout()},
                {"parameters", std::vector<double>(params.begin(), params.end())}};
  const Preprocessing& p = c.preprocessing;
  j["preprocessing"] = {{"fitted", p.fitted},
                        {"feature_mean", p.feature_mean},
                        {"feature_std", p.feature_std},
                        {"target_scale", p.target_scale},
                        {"target_scaled", p.target_scaled}};
  const losses::LossConfig& l = c.loss;
  j["loss"] = {{"family", std::string(losses::to_string(l.family))},
               {"alpha", l.alpha},
               {"lambda", l.lambda},
               {"quantile", l.quantile},
               {"ir_squared_deficit", l.ir_squared_deficit},
               {"ir_soft_sharpness", l.ir_soft_sharpness}};
  j["quantiles"] = c.quantiles;
  return j.dump(1);
}

Checkpoint checkpoint_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("checkpoint: ") + e.what(), 0, e.byte);
  }
  try {
    if (j.at("format").get<std::string>() != "intervalkit-checkpoint")
      throw ConfigError("not an intervalkit checkpoint");
    if (j.at("version").get<int>() != Checkpoint::kFormatVersion)
      throw ConfigError("unsupported checkpoint version " + j.at("version").dump());
    Checkpoint c;
    c.method = j.at("method").get<std::string>();
    const json& m = j.at("model");
    c.model = Mlp(m.at("inputs").get<std::size_t>(), m.at("hidden").get<std::size_t>(),
                  m.at("outputs").get<std::size_t>(), m.at("dropout").get<double>());
    const auto params = m.at("parameters").get<std::vector<double>>();
    if (params.size() != c.model.parameter_count())
      throw StructuralError("checkpoint parameter count does not match the declared shape");
    std::copy(params.begin(), params.end(), c.model.mutable_parameters().begin());
    const json& p = j.at("preprocessing");
    c.preprocessing.fitted = p.at("fitted").get<bool>();
    c.preprocessing.feature_mean = p.at("feature_mean").get<std::vector<double>>();
    c.preprocessing.feature_std = p.at("feature_std").get<std::vector<double>>();
    c.preprocessing.target_scale = p.at("target_scale").get<double>();
    c.preprocessing.target_scaled = p.at("target_scaled").get<bool>();
    const json& l = j.at("loss");
    c.loss.family = losses::parse_family(l.at("family").get<std::string>());
    c.loss.alpha = l.at("alpha").get<double>();
    c.loss.lambda = l.at("lambda").get<double>();
    c.loss.quantile = l.at("quantile").get<double>();
    c.loss.ir_squared_deficit = l.at("ir_squared_deficit").get<bool>();
    c.loss.ir_soft_sharpness = l.at("ir_soft_sharpness").get<double>();
    c.quantiles = j.at("quantiles").get<std::vector<double>>();
    return c;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("checkpoint: ") + e.what());
  }
}

void save_checkpoint(const Checkpoint& checkpoint, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write checkpoint " + path.string());
  out << to_json(checkpoint) << '\n';
  if (!out) throw IoError("failed while writing checkpoint " + path.string());
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open checkpoint " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return checkpoint_from_json(ss.str());
}

}  // namespace ik::net
