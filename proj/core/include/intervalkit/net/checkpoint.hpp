#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "intervalkit/core/dataset.hpp"
#include "intervalkit/losses/losses.hpp"
#include "intervalkit/net/mlp.hpp"

namespace ik::net {

/// Everything needed to reproduce predictions from a trained model.
struct Checkpoint {
  static constexpr int kFormatVersion = 1;

  Mlp model;
  Preprocessing preprocessing;
  losses::LossConfig loss;
  std::string method;
  /// Quantile pair fed to a quantile-conditioned (SQR) model; empty otherwise.
  std::vector<double> quantiles;
};

/// JSON text; doubles are written in shortest round-trip form so a reload is bit-exact.
std::string to_json(const Checkpoint& checkpoint);
/// Throws ParseError on malformed text and ConfigError on an unknown format version.
Checkpoint checkpoint_from_json(const std::string& text);

void save_checkpoint(const Checkpoint& checkpoint, const std::filesystem::path& path);
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace ik::net
