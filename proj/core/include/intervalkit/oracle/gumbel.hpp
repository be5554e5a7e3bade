#pragma once

#include <vector>

#include "intervalkit/losses/losses.hpp"

namespace ik::oracle {

/// Standard Gumbel, CDF exp(-exp(-x)).
double gumbel_cdf(double x);
double gumbel_pdf(double x);

/// Largest mu_l for which an alpha-coverage interval exists: CDF^-1(1 - alpha).
double gumbel_mu_l_limit(double alpha);

/// Upper bound with exactly alpha mass between mu_l and it:
/// -ln(-ln(alpha + exp(-exp(-mu_l)))). Throws DomainError when alpha + CDF(mu_l) >= 1.
double gumbel_upper(double alpha, double mu_l);
double gumbel_width(double alpha, double mu_l);

/// Integral of the Gumbel density over the quadrature window [-12, 40].
double gumbel_density_mass();

/// Expected loss along the exact-coverage curve, E_Y[L((mu_l, mu_u(mu_l)), Y)],
/// by adaptive Simpson (absolute tolerance 1e-8) split at both bounds. The
/// relaxed part is evaluated at alpha; RQR_W adds lambda * W^2 / 2.
double gumbel_expected_loss(losses::LossFamily family, double alpha, double lambda, double mu_l);

struct GumbelMinimum {
  double mu_l = 0.0;
  double mu_u = 0.0;
  double width = 0.0;
  double expected_loss = 0.0;
};

/// Golden-section minimization of gumbel_expected_loss over mu_l to 1e-6, on
/// [limit - 6, limit - 1e-9].
GumbelMinimum gumbel_argmin(losses::LossFamily family, double alpha, double lambda);

struct GumbelCurvePoint {
  double mu_l = 0.0;
  double width = 0.0;
  double loss = 0.0;
};

std::vector<GumbelCurvePoint> gumbel_curve(losses::LossFamily family, double alpha, double lambda,
                                           double mu_l_lo, double mu_l_hi, std::size_t points);

}  // namespace ik::oracle
