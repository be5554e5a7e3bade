#pragma once

namespace ik {

double normal_cdf(double z);
/// Upper tail 1 - Phi(z), accurate for large positive z.
double normal_sf(double z);
/// Inverse of normal_cdf for p in (0, 1).
double normal_quantile(double p);
double normal_pdf(double z);

}  // namespace ik
