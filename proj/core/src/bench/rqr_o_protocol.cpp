#include "intervalkit/bench/rqr_o_protocol.hpp"

#include <string>

#include "intervalkit/core/errors.hpp"

namespace ik::bench {

std::vector<double> default_orthogonality_ladder() {
  return {1.0, 0.5, 0.1, 0.05, 0.01, 0.005, 0.001, 0.0};
}

ProtocolResult rqr_o_protocol(const Dataset& raw, const std::vector<double>& ladder,
                              const RunOptions& options) {
  if (ladder.empty()) throw ConfigError("orthogonality ladder is empty");
  for (std::size_t i = 0; i < ladder.size(); ++i) {
    if (!(ladder[i] >= 0.0)) throw ConfigError("orthogonality ladder entries must be >= 0");
    if (i > 0 && !(ladder[i] < ladder[i - 1]))
      throw ConfigError("orthogonality ladder must be strictly decreasing");
  }
  if (options.base.method != Method::RQR_O)
    throw ConfigError("rqr_o_protocol trains RQR-O only");

  ProtocolResult out;
  for (double gamma : ladder) {
    RunOptions rung = options;
    rung.base.lambda = gamma;
    HyperGrid grid{{options.base.learning_rate}, {options.base.dropout}, {gamma}};
    GridSearchResult r = grid_search(raw, grid, rung);
    RungOutcome step{gamma, r.record.picp, r.record.has_winner && r.record.coverage_obtained};
    out.rungs.push_back(step);
    out.record = std::move(r.record);
    out.band = std::move(r.band);
    out.record.choice.lambda = gamma;
    if (step.coverage_obtained) {
      out.record.note = "ladder rung gamma=" + std::to_string(gamma);
      return out;
    }
  }
  out.record.note = "no ladder rung reached the coverage rule";
  return out;
}

}  // namespace ik::bench
