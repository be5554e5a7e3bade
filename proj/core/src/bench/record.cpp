#include "intervalkit/bench/record.hpp"

#include <cmath>

namespace ik::bench {

MeanSe mean_se(const std::vector<double>& values) {
  MeanSe r;
  if (values.empty()) return r;
  for (double v : values) r.mean += v;
  r.mean /= static_cast<double>(values.size());
  if (values.size() < 2) return r;
  double ss = 0.0;
  for (double v : values) ss += (v - r.mean) * (v - r.mean);
  const double sd = std::sqrt(ss / static_cast<double>(values.size() - 1));
  r.se = sd / std::sqrt(static_cast<double>(values.size()));
  return r;
}

bool coverage_rule(const MeanSe& picp, double alpha, double margin) {
  return std::abs(picp.mean - alpha) <= margin + picp.se;
}

void BenchmarkRecord::aggregate() {
  std::vector<double> p, m, w, h;
  for (const auto& r : per_seed) {
    p.push_back(r.picp);
    m.push_back(r.mpiw);
    w.push_back(r.wcpc);
    h.push_back(r.hsic);
  }
  picp = mean_se(p);
  mpiw = mean_se(m);
  wcpc = mean_se(w);
  hsic = mean_se(h);
  coverage_obtained = has_winner && !per_seed.empty() && coverage_rule(picp, alpha, coverage_margin);
}

}  // namespace ik::bench
