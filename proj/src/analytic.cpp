#include "maxhit/analytic.hpp"

#include <cmath>
#include <string>

#include "maxhit/errors.hpp"
#include "maxhit/quadrature.hpp"
#include "maxhit/special.hpp"

namespace maxhit::analytic {

using special::gamma_half_cdf;
using special::gamma_half_pdf;

Regime classify_regime(double mu_m) {
  if (std::fabs(mu_m) < kRegimeWindow) return Regime::neutral;
  if (std::fabs(mu_m - 1.0) < kRegimeWindow) return Regime::unit;
  if (std::fabs(mu_m + 1.0) < kRegimeWindow) return Regime::boundary;
  if (mu_m < -1.0) return Regime::subcritical;
  if (mu_m > 1.0) return Regime::supercritical;
  return Regime::generic;
}

void ModelParams::validate() const {
  if (!(m > 0.0) || !std::isfinite(m))
    throw domain_error("ModelParams: slope m must be positive and finite");
  if (!std::isfinite(mu)) throw domain_error("ModelParams: drift mu must be finite");
}

double f1(double t) {
  if (!(t > 0.0)) throw domain_error("f1: t must be positive");
  if (t < 1e-12) return std::sqrt(2.0 / (M_PI * t)) - 1.0;
  return 2.0 * gamma_half_pdf(t) - 1.0 + gamma_half_cdf(t);
}

double f1_tail_integral_form(double t) {
  if (!(t > 0.0)) throw domain_error("f1_tail_integral_form: t must be positive");
  quad::QuadratureSpec spec;
  spec.abs_tol = 1e-13;
  spec.rel_tol = 1e-13;
  // tail integral of e^{-y^2/(2t)} from t; integrand has decayed below
  // 1e-300 once (y^2)/(2t) > 700
  double y_hi = std::sqrt(1400.0 * t) + t;
  double tail = quad::integrate([t](double y) { return std::exp(-y * y / (2.0 * t)); },
                                t, y_hi, spec);
  return std::sqrt(2.0 / (M_PI * t)) * (std::exp(-0.5 * t) - tail);
}

double f1_ln_asymptotic(double s) {
  // f1(s) = sqrt(2/(pi s)) e^{-s/2} s^{-1} (1 - 3/s + 15/s^2 - 105/s^3 + ...)
  double inv = 1.0 / s;
  double series = 1.0 + inv * (-3.0 + inv * (15.0 + inv * (-105.0 + inv * 945.0)));
  return -0.5 * s + 0.5 * std::log(2.0 / (M_PI * s)) - std::log(s) +
         std::log(series);
}

double exp_mul_f1(double a, double s) {
  if (a <= 650.0 && s <= 1300.0) return std::exp(a) * f1(s);
  // both factors extreme; combine in log space (s is large whenever a is,
  // see the drifted density: s/a = (1+mu m)^2/(2 mu m) >= 2 for mu m > 0)
  double l = f1_ln_asymptotic(s) + a;
  if (l < -745.0) return 0.0;
  return std::exp(l);
}

double density_T(const ModelParams& p, double t) {
  p.validate();
  if (!(t > 0.0)) throw domain_error("density_T: t must be positive");
  const double m = p.m, mu = p.mu, mm = p.mu_m();
  switch (p.regime()) {
    case Regime::neutral:
      return f1(t / (m * m)) / (m * m);
    case Regime::boundary:
      return std::sqrt(2.0 / (M_PI * t)) * std::exp(-2.0 * t / (m * m)) / m;
    default: {
      double s = (1.0 + mm) * (1.0 + mm) * t / (m * m);
      double val = std::fabs(1.0 + mm) * exp_mul_f1(2.0 * mu * t / m, s);
      double extra = 2.0 * std::max(-mm - 1.0, 0.0);
      if (extra > 0.0) val += extra * std::exp(2.0 * mu * t / m);
      return val / (m * m);
    }
  }
}

double survival_T(const ModelParams& p, double t) {
  p.validate();
  if (!(t > 0.0)) throw domain_error("survival_T: t must be positive");
  const double m = p.m, mu = p.mu, mm = p.mu_m();
  const double tm2 = t / (m * m);
  switch (p.regime()) {
    case Regime::neutral:
      return 1.0 - gamma_half_cdf(tm2) - tm2 * f1(tm2);
    case Regime::unit:
      return m / std::sqrt(2.0 * M_PI * t) - exp_mul_f1(2.0 * tm2, 4.0 * tm2);
    case Regime::boundary:
      return m / std::sqrt(2.0 * M_PI * t) * std::exp(-2.0 * tm2) - f1(4.0 * tm2);
    default: {
      double sm = (1.0 - mm) * (1.0 - mm) * tm2;
      double sp = (1.0 + mm) * (1.0 + mm) * tm2;
      double F = std::fabs(mm - 1.0) * f1(sm) -
                 std::fabs(mm + 1.0) * exp_mul_f1(2.0 * mu * t / m, sp);
      double v = F / (2.0 * mm) + std::max(mm - 1.0, 0.0) / mm;
      double neg = std::max(-mm - 1.0, 0.0);
      if (neg > 0.0) v -= neg / mm * std::exp(2.0 * mu * t / m);
      return v;
    }
  }
}

double cdf_T(const ModelParams& p, double t) { return 1.0 - survival_T(p, t); }

double prob_T_finite(const ModelParams& p) {
  p.validate();
  double mm = p.mu_m();
  if (mm <= 1.0 + kRegimeWindow) return 1.0;
  return 1.0 / mm;
}

double moment_T(const ModelParams& p, int k) {
  p.validate();
  if (p.regime() != Regime::neutral)
    throw regime_error("moment_T: closed form available only for mu = 0");
  if (k < 1) throw domain_error("moment_T: k must be >= 1");
  // E[T^k] = (2k-1)!! / (k+1) * m^{2k}, the coefficient forced by the series
  // expansion of the Laplace transform (sqrt(1+2a m^2)-1)/(a m^2).
  double dfact = 1.0;
  for (int j = 3; j <= 2 * k - 1; j += 2) dfact *= j;
  return dfact / (k + 1.0) * std::pow(p.m, 2.0 * k);
}

double laplace_T(const ModelParams& p, double alpha) {
  p.validate();
  const double m = p.m, mm = p.mu_m();
  double lo = (mm >= -1.0) ? -(1.0 - mm) * (1.0 - mm) / (2.0 * m * m)
                           : 2.0 * p.mu / m;
  if (!(alpha > lo))
    throw convergence_region_error("laplace_T: alpha outside convergence region");
  double root = std::sqrt((1.0 - mm) * (1.0 - mm) + 2.0 * m * m * alpha);
  return 2.0 / (1.0 + mm + root);
}

double laplace_T_ratio_form(double m, double alpha) {
  if (!(m > 0.0)) throw domain_error("laplace_T_ratio_form: m must be positive");
  if (alpha == 0.0)
    throw domain_error("laplace_T_ratio_form: alpha = 0 is a removable point");
  return (std::sqrt(1.0 + 2.0 * alpha * m * m) - 1.0) / (alpha * m * m);
}

double joint_density_T_B(const ModelParams& p, double t, double x) {
  p.validate();
  if (!(t > 0.0)) throw domain_error("joint_density_T_B: t must be positive");
  const double m = p.m, mu = p.mu;
  double lead = t / m - x;
  if (lead <= 0.0) return 0.0;
  double w = 2.0 * t / m - x;
  double expo = mu * x - 0.5 * mu * mu * t - w * w / (2.0 * t);
  return lead / (m * t) * std::sqrt(2.0 / (M_PI * t)) * std::exp(expo);
}

double laplace_B(const ModelParams& p, double alpha) {
  p.validate();
  const double m = p.m, mm = p.mu_m();
  double ma = m * alpha;
  double lo = -(1.0 - mm) * (1.0 - mm) / 2.0;
  double hi = mm + 2.0 + std::sqrt(mm * mm + 4.0);
  if (!(ma > lo && ma < hi))
    throw convergence_region_error("laplace_B: alpha outside convergence window");
  double root = std::sqrt((1.0 - mm) * (1.0 - mm) + 2.0 * ma);
  return 2.0 / (1.0 + mm - ma + root);
}

double laplace_B_printed_form(double m, double alpha) {
  if (!(m > 0.0)) throw domain_error("laplace_B_printed_form: m must be positive");
  double ma = m * alpha;
  if (!(ma >= -0.5 && ma < 4.0))
    throw convergence_region_error("laplace_B_printed_form: m*alpha outside [-1/2, 4)");
  return 1.0 / (1.0 - ma + std::sqrt(1.0 + 2.0 * ma));
}

double joint_density_gap_max(const ModelParams& p, double u, double t) {
  p.validate();
  if (!(u > 0.0) || !(t > 0.0))
    throw domain_error("joint_density_gap_max: u and t must be positive");
  const double m = p.m, mu = p.mu;
  double tm = t * m;
  double expo = -(t + u) * (t + u) / (2.0 * tm);
  expo += mu * (t - u) - 0.5 * mu * mu * tm;
  return 2.0 * u / std::sqrt(2.0 * M_PI * tm * tm * tm) * std::exp(expo);
}

double joint_density_max_pos(double t, double y, double x) {
  if (!(t > 0.0)) throw domain_error("joint_density_max_pos: t must be positive");
  if (y < 0.0 || x > y)
    throw domain_error("joint_density_max_pos: requires y >= 0 and x <= y");
  double w = 2.0 * y - x;
  return std::sqrt(2.0 / (M_PI * t * t * t)) * w * std::exp(-w * w / (2.0 * t));
}

namespace {
void require_negative_drift(const ModelParams& p, const char* op) {
  p.validate();
  if (!(p.mu < 0.0))
    throw regime_error(std::string(op) + ": requires mu < 0");
}
}  // namespace

double joint_density_T_B_before_rho(const ModelParams& p, double t, double x) {
  require_negative_drift(p, "joint_density_T_B_before_rho");
  if (!(t > 0.0)) throw domain_error("joint_density_T_B_before_rho: t must be positive");
  const double m = p.m, amu = -p.mu;
  double lead = t / m - x;
  if (lead <= 0.0) return 0.0;
  double w = 2.0 * t / m - x;
  double expo = amu * x - 0.5 * p.mu * p.mu * t - 2.0 * amu * t / m - w * w / (2.0 * t);
  return lead / (m * t) * std::sqrt(2.0 / (M_PI * t)) * std::exp(expo);
}

double density_T_before_rho(const ModelParams& p, double t) {
  require_negative_drift(p, "density_T_before_rho");
  if (!(t > 0.0)) throw domain_error("density_T_before_rho: t must be positive");
  const double m = p.m, mm = p.mu_m();
  double s = (1.0 - mm) * (1.0 - mm) * t / (m * m);
  return (1.0 - mm) * f1(s) / (m * m);
}

double prob_T_before_rho(const ModelParams& p) {
  require_negative_drift(p, "prob_T_before_rho");
  return 1.0 / (1.0 - p.mu_m());
}

double joint_density_T_B_after_rho(const ModelParams& p, double t, double x) {
  require_negative_drift(p, "joint_density_T_B_after_rho");
  return joint_density_T_B(p, t, x) - joint_density_T_B_before_rho(p, t, x);
}

double density_T_after_rho(const ModelParams& p, double t) {
  require_negative_drift(p, "density_T_after_rho");
  return density_T(p, t) - density_T_before_rho(p, t);
}

double prob_T_after_rho(const ModelParams& p) {
  require_negative_drift(p, "prob_T_after_rho");
  return 1.0 - prob_T_before_rho(p);
}

double laplace_exponent(double lambda) {
  if (lambda < 0.0) throw domain_error("laplace_exponent: lambda must be >= 0");
  return lambda - std::sqrt(2.0 * lambda);
}

double laplace_exponent_inverse(double alpha) {
  if (alpha < -0.5) throw domain_error("laplace_exponent_inverse: alpha must be >= -1/2");
  return 1.0 + alpha + std::sqrt(1.0 + 2.0 * alpha);
}

}  // namespace maxhit::analytic
