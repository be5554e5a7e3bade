#include "intervalkit/oracle/numerics.hpp"

#include <cmath>

#include "intervalkit/core/errors.hpp"

namespace ik::oracle {

namespace {

struct Simpson {
  const std::function<double(double)>& f;
  int min_depth = 0;
  std::size_t evals = 0;
  double error = 0.0;

  double eval(double x) {
    ++evals;
    return f(x);
  }

  double recurse(double a, double b, double fa, double fm, double fb, double whole, double tol,
                 int depth, int level) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = eval(lm);
    const double frm = eval(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (level >= min_depth && std::abs(delta) <= 15.0 * tol) {
      error += std::abs(delta) / 15.0;
      return left + right + delta / 15.0;
    }
    if (depth <= 0)
      throw NumericError("adaptive_simpson: depth exhausted near [" + std::to_string(a) + ", " +
                         std::to_string(b) + "]");
    return recurse(a, m, fa, flm, fm, left, 0.5 * tol, depth - 1, level + 1) +
           recurse(m, b, fm, frm, fb, right, 0.5 * tol, depth - 1, level + 1);
  }
};

}  // namespace

QuadratureResult adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                                  double abs_tol, int max_depth, int min_depth) {
  if (a == b) return {};
  Simpson s{f, min_depth};
  const double fa = s.eval(a);
  const double fb = s.eval(b);
  const double m = 0.5 * (a + b);
  const double fm = s.eval(m);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  const double v = s.recurse(a, b, fa, fm, fb, whole, abs_tol, max_depth, 0);
  return {v, s.error, s.evals};
}

Minimum1d golden_section(const std::function<double(double)>& f, double a, double b, double tol) {
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - invphi * (b - a);
  double d = a + invphi * (b - a);
  double fc = f(c);
  double fd = f(d);
  std::size_t evals = 2;
  while (b - a > tol) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - invphi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + invphi * (b - a);
      fd = f(d);
    }
    ++evals;
  }
  const double x = 0.5 * (a + b);
  const double fx = f(x);
  if (fx <= fc && fx <= fd) return {x, fx, evals + 1};
  return fc <= fd ? Minimum1d{c, fc, evals + 1} : Minimum1d{d, fd, evals + 1};
}

double quantile_sorted(const double* sorted, std::size_t n, double p) {
  if (n == 0) throw ConfigError("quantile of an empty sample");
  const double h = (static_cast<double>(n) - 1.0) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  if (lo + 1 >= n) return sorted[n - 1];
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[lo + 1] - sorted[lo]);
}

}  // namespace ik::oracle
