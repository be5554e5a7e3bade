#include "intervalkit/oracle/brute_force.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "intervalkit/core/errors.hpp"
#include "intervalkit/oracle/numerics.hpp"

namespace ik::oracle {

namespace {

using losses::LossConfig;
using losses::LossFamily;

bool relaxed(LossFamily f) { return f == LossFamily::RQR || f == LossFamily::RQR_W; }

double coverage_alpha_hat(const LossConfig& loss) { return loss.coverage_target().alpha_hat; }

double summed_loss(const LossConfig& loss, std::span<const double> y, double u, double v) {
  double total = 0.0;
  for (double yi : y) total += losses::pointwise_loss(loss, {u, v}, yi);
  return total;
}

std::size_t closed_count(std::span<const double> y, double lo, double hi) {
  std::size_t c = 0;
  for (double yi : y)
    if (lo <= yi && yi <= hi) ++c;
  return c;
}

struct CellMin {
  std::size_t i = 0;
  std::size_t j = 0;
  double u = 0.0;
  double v = 0.0;
  double value = std::numeric_limits<double>::infinity();
};

// The relaxed objective restricted to cell (i, j), i <= j, where mu1 lies in
// [e_i, e_{i+1}] and mu2 in [e_j, e_{j+1}] with e_0 = lo, e_k = s_k, e_{N+1} = hi.
// Inside the open cell the covered samples are s_{i+1}..s_j, so with
// c_k = alpha_hat - I_k the objective is Q - B(u+v) + C uv + L (v-u)^2.
class CellSolver {
 public:
  CellSolver(const LossConfig& loss, std::span<const double> samples, double lo, double hi)
      : sorted_(samples.begin(), samples.end()),
        alpha_hat_(coverage_alpha_hat(loss)),
        L_(0.5 * static_cast<double>(samples.size()) *
           (loss.family == LossFamily::RQR_W ? loss.lambda : 0.0)) {
    std::sort(sorted_.begin(), sorted_.end());
    const std::size_t n = sorted_.size();
    edges_.reserve(n + 2);
    edges_.push_back(lo);
    edges_.insert(edges_.end(), sorted_.begin(), sorted_.end());
    edges_.push_back(hi);
    s1_.assign(n + 1, 0.0);
    s2_.assign(n + 1, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
      s1_[k + 1] = s1_[k] + sorted_[k];
      s2_[k + 1] = s2_[k] + sorted_[k] * sorted_[k];
    }
  }

  std::size_t cells() const { return sorted_.size() + 1; }
  const std::vector<double>& edges() const { return edges_; }

  std::size_t cell_of(double x) const {
    const auto it = std::upper_bound(sorted_.begin(), sorted_.end(), x);
    return static_cast<std::size_t>(it - sorted_.begin());
  }

  CellMin solve(std::size_t i, std::size_t j) const {
    const double n = static_cast<double>(sorted_.size());
    const double cnt = static_cast<double>(j - i);
    const double C = alpha_hat_ * n - cnt;
    const double B = alpha_hat_ * s1_.back() - (s1_[j] - s1_[i]);
    const double Q = alpha_hat_ * s2_.back() - (s2_[j] - s2_[i]);
    const double L = L_;
    auto f = [&](double u, double v) { return Q - B * (u + v) + C * u * v + L * (v - u) * (v - u); };

    const double u0 = edges_[i], u1 = edges_[i + 1];
    const double v0 = edges_[j], v1 = edges_[j + 1];
    CellMin best{i, j, u0, v0, f(u0, v0)};
    auto consider = [&](double u, double v) {
      const double val = f(u, v);
      if (val < best.value) best = {i, j, u, v, val};
    };
    consider(u0, v1);
    consider(u1, v0);
    consider(u1, v1);
    if (L > 0.0) {
      for (double u : {u0, u1}) consider(u, std::clamp((B - C * u + 2.0 * L * u) / (2.0 * L), v0, v1));
      for (double v : {v0, v1}) consider(std::clamp((B - C * v + 2.0 * L * v) / (2.0 * L), u0, u1), v);
    }
    if (C > 0.0 && 4.0 * L - C > 0.0) {
      const double x = B / C;
      if (x >= u0 && x <= u1 && x >= v0 && x <= v1) consider(x, x);
    }
    return best;
  }

 private:
  std::vector<double> sorted_;
  std::vector<double> edges_;
  std::vector<double> s1_;
  std::vector<double> s2_;
  double alpha_hat_;
  double L_;
};

OracleResult finish(const LossConfig& loss, std::span<const double> samples,
                    const CellSolver& solver, const std::vector<CellMin>& candidates,
                    double resolution) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& c : candidates) best = std::min(best, c.value);
  const double tol = 1e-12 * std::max(1.0, std::abs(best));
  const auto target = static_cast<std::size_t>(std::llround(loss.alpha * static_cast<double>(samples.size())));

  OracleResult r;
  r.tied_count_min = std::numeric_limits<std::size_t>::max();
  const CellMin* chosen = nullptr;
  for (const auto& c : candidates) {
    if (c.value > best + tol) continue;
    const std::size_t cnt = c.j - c.i;
    r.tied_count_min = std::min(r.tied_count_min, cnt);
    r.tied_count_max = std::max(r.tied_count_max, cnt);
    const bool hits = cnt == target;
    if (!chosen || (hits && (chosen->j - chosen->i) != target) ||
        (hits == ((chosen->j - chosen->i) == target) && c.value < chosen->value))
      chosen = &c;
  }

  // Move off the cell boundary so the reported point lies where the chosen
  // cell's coverage count applies.
  const auto& e = solver.edges();
  auto inward = [&](double x, double a, double b) {
    const double w = b - a;
    if (!(w > 0.0)) return x;
    const double delta = std::min(0.5 * resolution, 0.25 * w);
    return std::clamp(x, a + delta, b - delta);
  };
  double u = inward(chosen->u, e[chosen->i], e[chosen->i + 1]);
  double v = inward(chosen->v, e[chosen->j], e[chosen->j + 1]);
  if (u > v) std::swap(u, v);

  r.mu1 = u;
  r.mu2 = v;
  r.n = samples.size();
  r.loss_value = summed_loss(loss, samples, u, v) / static_cast<double>(r.n);
  r.covered = closed_count(samples, u, v);
  r.empirical_coverage = static_cast<double>(r.covered) / static_cast<double>(r.n);
  r.grid_resolution = resolution;
  return r;
}

void require_samples(std::span<const double> samples) {
  if (samples.size() < 2) throw ConfigError("brute-force oracle needs at least 2 samples");
  for (double s : samples)
    if (!std::isfinite(s)) throw ConfigError("brute-force oracle: non-finite sample");
}

}  // namespace

GridSpec default_grid(std::span<const double> samples, std::size_t steps, double margin_fraction) {
  require_samples(samples);
  const auto [lo, hi] = std::minmax_element(samples.begin(), samples.end());
  const double range = std::max(*hi - *lo, 1e-12);
  return {*lo - margin_fraction * range, *hi + margin_fraction * range, steps};
}

OracleResult brute_force_minimize(const LossConfig& loss, std::span<const double> samples,
                                  GridSpec grid) {
  require_samples(samples);
  loss.validate();
  if (loss.family == LossFamily::RQR_O || loss.family == LossFamily::IR ||
      loss.family == LossFamily::SQR_PINBALL)
    throw ConfigError("brute-force oracle supports pointwise two-bound losses only");
  const auto [smin, smax] = std::minmax_element(samples.begin(), samples.end());
  if (grid.steps < 2 || !(grid.min <= *smin) || !(grid.max >= *smax))
    throw ConfigError("brute-force grid [" + std::to_string(grid.min) + ", " +
                      std::to_string(grid.max) + "] does not cover the sample range");

  const double step = (grid.max - grid.min) / static_cast<double>(grid.steps - 1);
  const bool symmetric = relaxed(loss.family);
  double best = std::numeric_limits<double>::infinity();
  double bu = grid.min, bv = grid.min;
  for (std::size_t a = 0; a < grid.steps; ++a) {
    const double u = grid.min + step * static_cast<double>(a);
    for (std::size_t b = symmetric ? a : 0; b < grid.steps; ++b) {
      const double v = grid.min + step * static_cast<double>(b);
      const double f = summed_loss(loss, samples, u, v);
      if (f < best) {
        best = f;
        bu = u;
        bv = v;
      }
    }
  }

  constexpr double kResolution = 1e-4;
  double h = step;
  for (int iter = 0; iter < 60; ++iter) {
    const double pu = bu, pv = bv;
    bu = golden_section([&](double u) { return summed_loss(loss, samples, u, bv); }, bu - h, bu + h,
                        0.25 * kResolution).x;
    bv = golden_section([&](double v) { return summed_loss(loss, samples, bu, v); }, bv - h, bv + h,
                        0.25 * kResolution).x;
    if (std::abs(bu - pu) < kResolution && std::abs(bv - pv) < kResolution && h <= kResolution) break;
    h = std::max(0.5 * h, kResolution);
  }

  if (!symmetric) {
    OracleResult r;
    if (bu > bv) std::swap(bu, bv);
    r.mu1 = bu;
    r.mu2 = bv;
    r.n = samples.size();
    r.loss_value = summed_loss(loss, samples, bu, bv) / static_cast<double>(r.n);
    r.covered = closed_count(samples, bu, bv);
    r.empirical_coverage = static_cast<double>(r.covered) / static_cast<double>(r.n);
    r.grid_resolution = kResolution;
    r.tied_count_min = r.tied_count_max = r.covered;
    return r;
  }

  const CellSolver solver(loss, samples, grid.min, grid.max);
  std::size_t iu = solver.cell_of(std::min(bu, bv));
  std::size_t iv = solver.cell_of(std::max(bu, bv));
  constexpr std::size_t kReach = 3;
  std::vector<CellMin> candidates;
  const std::size_t last = solver.cells() - 1;
  for (std::size_t i = iu > kReach ? iu - kReach : 0; i <= std::min(last, iu + kReach); ++i)
    for (std::size_t j = iv > kReach ? iv - kReach : 0; j <= std::min(last, iv + kReach); ++j)
      if (i <= j) candidates.push_back(solver.solve(i, j));
  return finish(loss, samples, solver, candidates, kResolution);
}

OracleResult exact_pair_search(const LossConfig& loss, std::span<const double> samples,
                               double resolution) {
  require_samples(samples);
  loss.validate();
  if (!relaxed(loss.family)) throw ConfigError("exact_pair_search supports RQR and RQR_W only");
  const GridSpec g = default_grid(samples);
  const CellSolver solver(loss, samples, g.min, g.max);
  // Two passes: find the minimum, then keep only the cells that tie with it.
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < solver.cells(); ++i)
    for (std::size_t j = i; j < solver.cells(); ++j) best = std::min(best, solver.solve(i, j).value);
  const double tol = 1e-12 * std::max(1.0, std::abs(best));
  std::vector<CellMin> candidates;
  for (std::size_t i = 0; i < solver.cells(); ++i)
    for (std::size_t j = i; j < solver.cells(); ++j) {
      CellMin c = solver.solve(i, j);
      if (c.value <= best + tol) candidates.push_back(c);
    }
  return finish(loss, samples, solver, candidates, resolution);
}

}  // namespace ik::oracle
