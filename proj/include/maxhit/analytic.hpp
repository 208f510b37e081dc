#pragma once

#include <cstdint>

namespace maxhit::analytic {

/// Drift/slope regime, classified on the product mu*m with an exact-comparison
/// window of 1e-12 around the special points -1, 0, 1 (the generic formulas
/// have removable singularities there).
enum class Regime : std::uint8_t {
  subcritical,    // mu*m < -1
  boundary,       // mu*m == -1
  neutral,        // mu*m == 0 (driftless)
  unit,           // mu*m == 1
  supercritical,  // mu*m > 1  (defective law)
  generic
};

constexpr double kRegimeWindow = 1e-12;

Regime classify_regime(double mu_m);

/// Barrier slope m > 0 and drift mu; the single configuration object for
/// every law in the library.
struct ModelParams {
  double m = 1.0;
  double mu = 0.0;

  double mu_m() const { return mu * m; }
  Regime regime() const { return classify_regime(mu * m); }
  void validate() const;  // throws domain_error unless m > 0 and finite
};

enum class LawKind : std::uint8_t { density, probability, transform, moment };

struct LawValue {
  double value = 0.0;
  LawKind kind = LawKind::density;
};

/// Evaluation point for the laws: time t > 0, position x, gap u >= 0.
struct EvalPoint {
  double t = 1.0;
  double x = 0.0;
  double u = 0.0;
};

// --- base (unit-slope, driftless) first-hit density -----------------------

/// Density of the first hit time for m = 1, mu = 0, evaluated in the stable
/// erf form 2 g(t) - 1 + G(t) with g, G the gamma(1/2, rate 1/2) density and
/// CDF.  For t below 1e-12 the square-root asymptote is used.
double f1(double t);

/// Same quantity evaluated through the tail-integral route, with the tail
/// integral done by adaptive quadrature.  Kept as an independent cross-check
/// path; do not use in hot code.
double f1_tail_integral_form(double t);

/// log f1(t) for large t (asymptotic series), and the stable product
/// e^{a} * f1(s) used by the drifted formulas where both factors can
/// overflow/underflow while the product stays finite.
double f1_ln_asymptotic(double s);
double exp_mul_f1(double a, double s);

// --- laws of the first hit time T ------------------------------------------

/// Density of T at t (possibly defective for mu*m > 1).
double density_T(const ModelParams& p, double t);

/// P(T > t).
double survival_T(const ModelParams& p, double t);

/// CDF of T restricted to finite values: P(T <= t).
double cdf_T(const ModelParams& p, double t);

/// P(T < infinity): 1 for mu*m <= 1, else 1/(mu*m).
double prob_T_finite(const ModelParams& p);

/// k-th moment of T for the driftless case,
///   E[T^k] = (1*3*...*(2k-1)) / (k+1) * m^{2k}.
/// Throws regime_error when mu != 0 (no closed moment formula there; use the
/// Laplace transform numerically instead).
double moment_T(const ModelParams& p, int k);

/// E[e^{-alpha T}; T < infinity].  Throws convergence_region_error outside
/// the convergence half-line.
double laplace_T(const ModelParams& p, double alpha);

/// Algebraically equivalent square-root-ratio form of the driftless
/// transform, defined for alpha != 0.  Test/cross-check route.
double laplace_T_ratio_form(double m, double alpha);

// --- joint laws -------------------------------------------------------------

/// Joint density of (T, B_T) at (t, x); zero for x >= t/m.
double joint_density_T_B(const ModelParams& p, double t, double x);

/// E[e^{-alpha B_T}; T < infinity] within the convergence window
///   -(1-mu m)^2/2 < m alpha < mu m + 2 + sqrt((mu m)^2 + 4).
double laplace_B(const ModelParams& p, double alpha);

/// The printed driftless form 1/(1 - m a + sqrt(1 + 2 m a)).  It fails
/// normalization at alpha = 0 (gives 1/2) and is kept only so the
/// discrepancy against the corrected transform can be reproduced.
double laplace_B_printed_form(double m, double alpha);

/// Joint density of (S_T - B_T, S_T) at (u, t), u > 0, t > 0.
double joint_density_gap_max(const ModelParams& p, double u, double t);

/// Joint density of (S_t, B_t) at a fixed time t: the running-maximum /
/// endpoint law sqrt(2/(pi t^3)) (2y - x) e^{-(2y-x)^2/(2t)} for y >= 0,
/// x <= y; zero outside.
double joint_density_max_pos(double t, double y, double x);

// --- pre-maximum decomposition (negative drift) ------------------------------

/// Joint density of (T, B_T) restricted to {T < rho}, rho the time the
/// all-time maximum is attained.  Requires mu < 0.
double joint_density_T_B_before_rho(const ModelParams& p, double t, double x);

/// Marginal density of T on {T < rho}.  Requires mu < 0.
double density_T_before_rho(const ModelParams& p, double t);

/// P(T < rho) = 1/(1 - mu m).  Requires mu < 0.
double prob_T_before_rho(const ModelParams& p);

/// Complements on {rho <= T}, by subtraction from the unrestricted laws.
double joint_density_T_B_after_rho(const ModelParams& p, double t, double x);
double density_T_after_rho(const ModelParams& p, double t);
double prob_T_after_rho(const ModelParams& p);

// --- ladder-process Laplace exponent ----------------------------------------

/// psi(lambda) = lambda - sqrt(2 lambda), lambda >= 0.
double laplace_exponent(double lambda);

/// Inverse branch phi(alpha) = 1 + alpha + sqrt(1 + 2 alpha), alpha >= -1/2;
/// phi(psi(lambda)) = lambda for lambda >= 2.
double laplace_exponent_inverse(double alpha);

}  // namespace maxhit::analytic
