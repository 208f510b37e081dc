#pragma once

#include <cmath>

namespace maxhit::special {

/// Standard normal CDF.
inline double norm_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

/// Standard normal density.
inline double norm_pdf(double x) {
  return std::exp(-0.5 * x * x) / std::sqrt(2.0 * M_PI);
}

/// Inverse of the standard normal CDF.
double norm_quantile(double p);

/// Scaled complementary error function e^{x^2} erfc(x), overflow-free for
/// large positive x. For negative x uses erfcx(-x) reflection and may
/// overflow for x < -26 (caller's responsibility).
double erfcx(double x);

/// Regularized lower incomplete gamma P(a, x).
double gamma_p(double a, double x);

/// Regularized upper incomplete gamma Q(a, x) = 1 - P(a, x).
double gamma_q(double a, double x);

/// Survival function of the chi-squared distribution with k dof.
inline double chisq_sf(double k, double x) { return gamma_q(0.5 * k, 0.5 * x); }

/// Asymptotic Kolmogorov distribution survival function
/// Q(lambda) = 2 sum_{j>=1} (-1)^{j-1} exp(-2 j^2 lambda^2).
/// Uses the dual theta-series form for small lambda; truncation error is
/// below 1e-8 across the usable range.
double kolmogorov_sf(double lambda);

/// Density of the gamma distribution with shape 1/2 and rate 1/2
/// (the law of Z^2 for Z standard normal).
inline double gamma_half_pdf(double t) {
  return std::exp(-0.5 * t) / std::sqrt(2.0 * M_PI * t);
}

/// CDF of the same distribution: erf(sqrt(t/2)).
inline double gamma_half_cdf(double t) { return std::erf(std::sqrt(0.5 * t)); }

/// CDF of the gamma distribution with shape 1/2 and rate `rate`:
/// P(1/2, rate*y) = erf(sqrt(rate*y)).
inline double gamma_shape_half_cdf(double rate, double y) {
  if (y <= 0.0) return 0.0;
  return std::erf(std::sqrt(rate * y));
}

}  // namespace maxhit::special
