#include <doctest.h>

#include <cmath>
#include <vector>

#include "maxhit/analytic.hpp"
#include "maxhit/errors.hpp"
#include "maxhit/quadrature.hpp"
#include "maxhit/special.hpp"

using namespace maxhit;
using namespace maxhit::analytic;

TEST_SUITE_BEGIN("analytic");

namespace {
const ModelParams kUnit{1.0, 0.0};
}

TEST_CASE("regime classification") {
  CHECK(classify_regime(0.0) == Regime::neutral);
  CHECK(classify_regime(5e-13) == Regime::neutral);
  CHECK(classify_regime(1.0) == Regime::unit);
  CHECK(classify_regime(-1.0) == Regime::boundary);
  CHECK(classify_regime(-2.0) == Regime::subcritical);
  CHECK(classify_regime(3.0) == Regime::supercritical);
  CHECK(classify_regime(0.4) == Regime::generic);
  CHECK_THROWS_AS(ModelParams({-1.0, 0.0}).validate(), domain_error);
}

TEST_CASE("base density values and asymptotics") {
  // frozen: f1(1) = 2 e^{-1/2}/sqrt(2 pi) - 1 + erf(sqrt(1/2))
  CHECK(f1(1.0) == doctest::Approx(0.16663094117537260).epsilon(1e-14));
  // small-t expansion: f1(t) - (sqrt(2/(pi t)) - 1) -> 0
  for (double t : {1e-2, 1e-4, 1e-6}) {
    double diff = f1(t) - (std::sqrt(2.0 / (M_PI * t)) - 1.0);
    CHECK(std::fabs(diff) < 2.0 * std::sqrt(t));
  }
  // tail-integral route agrees with the erf route (independent quadrature)
  for (double t : {0.05, 0.2, 0.5, 1.0, 2.0, 5.0, 20.0}) {
    CHECK(f1_tail_integral_form(t) == doctest::Approx(f1(t)).epsilon(1e-10));
  }
  // asymptotic log agrees with the direct value where both are reliable
  for (double s : {200.0, 400.0, 800.0}) {
    CHECK(f1_ln_asymptotic(s) == doctest::Approx(std::log(f1(s))).epsilon(1e-8));
  }
}

TEST_CASE("density_T branches") {
  CHECK(density_T(kUnit, 1.0) == doctest::Approx(0.16663094117537260).epsilon(1e-14));
  // boundary branch mu*m = -1: (1/m) sqrt(2/(pi t)) e^{-2t/m^2}
  ModelParams b{1.0, -1.0};
  CHECK(density_T(b, 1.0) ==
        doctest::Approx(std::sqrt(2.0 / M_PI) * std::exp(-2.0)).epsilon(1e-14));
  // scaling structure: density for m=2 is (1/4) f1(t/4)
  ModelParams m2{2.0, 0.0};
  for (double t : {0.3, 1.0, 2.7}) {
    CHECK(density_T(m2, t) == doctest::Approx(0.25 * f1(0.25 * t)).epsilon(1e-14));
  }
  // generic branch continuity toward boundary branch
  ModelParams near_b{1.0, -1.0 + 1e-6};
  CHECK(density_T(near_b, 1.0) == doctest::Approx(density_T(b, 1.0)).epsilon(1e-4));
  CHECK_THROWS_AS(density_T(kUnit, 0.0), domain_error);
  CHECK_THROWS_AS(density_T(kUnit, -1.0), domain_error);
}

TEST_CASE("density integrates to the finiteness probability") {
  quad::QuadratureSpec spec;
  spec.abs_tol = 1e-11;
  spec.rel_tol = 1e-11;
  auto total = [&](const ModelParams& p, double t_hi) {
    return quad::integrate([&](double t) { return density_T(p, t); }, 1e-14, t_hi, spec);
  };
  CHECK(total(kUnit, 400.0) == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(total(ModelParams{1.0, -2.0}, 200.0) == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(total(ModelParams{1.0, -1.0}, 400.0) == doctest::Approx(1.0).epsilon(1e-8));
  // defective law: integrates to 1/(mu m)
  CHECK(total(ModelParams{1.0, 2.0}, 600.0) == doctest::Approx(0.5).epsilon(1e-7));
}

TEST_CASE("survival_T values and limits") {
  // frozen: 1 - erf(sqrt(1/2)) - f1(1)
  CHECK(survival_T(kUnit, 1.0) == doctest::Approx(0.15067956668754151).epsilon(1e-13));
  CHECK(survival_T(kUnit, 1e-10) == doctest::Approx(1.0).epsilon(1e-4));
  // defect: mu m = 2 -> 1 - 1/2
  ModelParams d{1.0, 2.0};
  CHECK(survival_T(d, 500.0) == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(prob_T_finite(d) == doctest::Approx(0.5));
  CHECK(prob_T_finite(kUnit) == 1.0);
  CHECK(prob_T_finite(ModelParams{3.0, 1.0 / 3.0}) == 1.0);
  // survival at unit regime, frozen against cumulative quadrature of the density
  ModelParams u{1.0, 1.0};
  CHECK(survival_T(u, 1.0) == doctest::Approx(0.33620400244634121).epsilon(1e-12));
  // boundary regime d03 value at t=1: e^{-2}/sqrt(2 pi) - f1(4)
  ModelParams bd{1.0, -1.0};
  double d03 = std::exp(-2.0) / std::sqrt(2.0 * M_PI) - f1(4.0);
  CHECK(survival_T(bd, 1.0) == doctest::Approx(d03).epsilon(1e-14));
}

TEST_CASE("survival is the integral of the density (all regimes)") {
  quad::QuadratureSpec spec;
  spec.abs_tol = 1e-12;
  spec.rel_tol = 1e-12;
  for (ModelParams p : {ModelParams{1.0, 0.0}, ModelParams{1.0, 0.5},
                        ModelParams{1.0, 1.0}, ModelParams{1.0, -1.0},
                        ModelParams{2.0, -1.3}, ModelParams{0.7, 2.5}}) {
    double c = quad::integrate([&](double t) { return density_T(p, t); }, 1e-14, 1.0, spec);
    CHECK(survival_T(p, 1.0) == doctest::Approx(1.0 - c).epsilon(1e-9));
  }
}

TEST_CASE("density is minus the derivative of survival") {
  const double h = 1e-5;
  for (ModelParams p : {ModelParams{1.0, 0.0}, ModelParams{1.0, 0.5},
                        ModelParams{1.0, 1.0}, ModelParams{1.0, -1.0},
                        ModelParams{1.5, -0.4}}) {
    for (double t : {0.3, 0.8, 1.7, 3.1}) {
      double fd = -(survival_T(p, t + h) - survival_T(p, t - h)) / (2.0 * h);
      CHECK(fd == doctest::Approx(density_T(p, t)).epsilon(2e-7));
    }
  }
}

TEST_CASE("survival branch continuity at the special drift products") {
  const double eps = 1e-6;
  for (double t : {0.5, 1.0, 2.0}) {
    CHECK(survival_T(ModelParams{1.0, eps}, t) ==
          doctest::Approx(survival_T(ModelParams{1.0, 0.0}, t)).epsilon(1e-4));
    CHECK(survival_T(ModelParams{1.0, 1.0 + eps}, t) ==
          doctest::Approx(survival_T(ModelParams{1.0, 1.0}, t)).epsilon(1e-4));
    CHECK(survival_T(ModelParams{1.0, -1.0 - eps}, t) ==
          doctest::Approx(survival_T(ModelParams{1.0, -1.0}, t)).epsilon(1e-4));
  }
}

TEST_CASE("moments") {
  CHECK(moment_T(kUnit, 1) == doctest::Approx(0.5));
  // second and third moments pinned by the transform expansion and verified
  // against direct quadrature of t^k f1(t)
  CHECK(moment_T(kUnit, 2) == doctest::Approx(1.0));
  CHECK(moment_T(kUnit, 3) == doctest::Approx(3.75));
  CHECK(moment_T(ModelParams{2.0, 0.0}, 1) == doctest::Approx(2.0));
  quad::QuadratureSpec spec;
  spec.abs_tol = 1e-11;
  for (int k : {1, 2, 3}) {
    double q = quad::integrate(
        [&](double t) { return std::pow(t, k) * f1(t); }, 1e-14, 500.0, spec);
    CHECK(q == doctest::Approx(moment_T(kUnit, k)).epsilon(1e-8));
  }
  CHECK_THROWS_AS(moment_T(ModelParams{1.0, 0.3}, 1), regime_error);
  CHECK_THROWS_AS(moment_T(kUnit, 0), domain_error);
}

TEST_CASE("laplace transform of T") {
  CHECK(laplace_T(kUnit, 1.0) == doctest::Approx(2.0 / (1.0 + std::sqrt(3.0))).epsilon(1e-15));
  CHECK(laplace_T(kUnit, 0.0) == doctest::Approx(1.0));
  CHECK(laplace_T(ModelParams{1.0, 2.0}, 0.0) == doctest::Approx(0.5));
  // the two driftless algebraic forms agree
  for (double a : {-0.4, 0.1, 1.0, 10.0}) {
    CHECK(laplace_T(kUnit, a) == doctest::Approx(laplace_T_ratio_form(1.0, a)).epsilon(1e-14));
  }
  // drift formula agrees with direct quadrature (mu = 0.5)
  ModelParams p{1.0, 0.5};
  quad::QuadratureSpec spec;
  spec.abs_tol = 1e-11;
  double q = quad::integrate(
      [&](double t) { return std::exp(-t) * density_T(p, t); }, 1e-14, 200.0, spec);
  CHECK(laplace_T(p, 1.0) == doctest::Approx(q).epsilon(1e-9));
  CHECK_THROWS_AS(laplace_T(kUnit, -0.51), convergence_region_error);
  // moments recovered from the transform by finite differences
  double h = 1e-5;
  double d1 = -(laplace_T(kUnit, h) - laplace_T(kUnit, -h)) / (2.0 * h);
  CHECK(d1 == doctest::Approx(moment_T(kUnit, 1)).epsilon(1e-6));
  double h2 = 1e-4;
  double d2 = (laplace_T(kUnit, h2) - 2.0 * laplace_T(kUnit, 0.0) + laplace_T(kUnit, -h2)) / (h2 * h2);
  CHECK(d2 == doctest::Approx(moment_T(kUnit, 2)).epsilon(1e-6));
}

TEST_CASE("joint density of (T, B_T)") {
  // frozen: sqrt(2/pi) e^{-2}
  CHECK(joint_density_T_B(kUnit, 1.0, 0.0) ==
        doctest::Approx(0.10798193302637610).epsilon(1e-14));
  CHECK(joint_density_T_B(kUnit, 1.0, 1.0) == 0.0);
  CHECK(joint_density_T_B(kUnit, 1.0, 2.0) == 0.0);
  CHECK_THROWS_AS(joint_density_T_B(kUnit, -1.0, 0.0), domain_error);
  // marginalizing x recovers density_T (driftless and drifted)
  quad::QuadratureSpec spec;
  spec.abs_tol = 1e-12;
  for (ModelParams p : {ModelParams{1.0, 0.0}, ModelParams{1.0, 0.7}, ModelParams{1.0, -0.9}}) {
    for (double t : {0.4, 1.0, 2.3}) {
      double lo = -std::sqrt(1400.0 * t) - 2.0 * t;
      double q = quad::integrate([&](double x) { return joint_density_T_B(p, t, x); },
                                 lo, t / p.m, spec);
      CHECK(q == doctest::Approx(density_T(p, t)).epsilon(1e-9));
    }
  }
}

TEST_CASE("joint density normalization over the whole domain") {
  // integrate the x-marginal (= density_T) over t: driftless mass 1
  quad::QuadratureSpec spec;
  spec.abs_tol = 1e-10;
  double mass = quad::integrate([&](double t) { return density_T(kUnit, t); },
                                1e-14, 400.0, spec);
  CHECK(mass == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("scaling identity for the joint density") {
  // psi_m(t,x) = m^{-3} psi_1(t/m^2, x/m), pointwise
  for (double m : {0.5, 2.0, 3.7}) {
    ModelParams pm{m, 0.0};
    for (double t : {0.2, 1.0, 3.0}) {
      for (double x : {-2.0, -0.3, 0.1}) {
        double lhs = joint_density_T_B(pm, t, x);
        double rhs = joint_density_T_B(kUnit, t / (m * m), x / m) / (m * m * m);
        if (lhs == 0.0) {
          CHECK(rhs == 0.0);
        } else {
          CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
        }
      }
    }
  }
}

TEST_CASE("laplace transform of B_T (corrected form)") {
  CHECK(laplace_B(kUnit, 0.0) == doctest::Approx(1.0));
  CHECK(laplace_B(kUnit, 1.0) == doctest::Approx(2.0 / std::sqrt(3.0)).epsilon(1e-15));
  // printed driftless form fails normalization at 0; kept for the
  // documented discrepancy
  CHECK(laplace_B_printed_form(1.0, 0.0) == doctest::Approx(0.5));
  CHECK(laplace_B_printed_form(1.0, 1.0) == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-15));
  CHECK_THROWS_AS(laplace_B(kUnit, 4.01), convergence_region_error);
  CHECK_THROWS_AS(laplace_B(kUnit, -0.51), convergence_region_error);
  // first moment of B_T is zero: central difference of the transform
  double h = 1e-5;
  double d1 = -(laplace_B(kUnit, h) - laplace_B(kUnit, -h)) / (2.0 * h);
  CHECK(d1 == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("gap / maximum joint law") {
  CHECK(joint_density_gap_max(kUnit, 1.0, 1.0) ==
        doctest::Approx(0.10798193302637610).epsilon(1e-14));
  // change of variables tie-in with the (T, B_T) density at t=1, x=0
  CHECK(joint_density_gap_max(kUnit, 1.0, 1.0) ==
        doctest::Approx(joint_density_T_B(kUnit, 1.0, 0.0)).epsilon(1e-14));
  CHECK_THROWS_AS(joint_density_gap_max(kUnit, 0.0, 1.0), domain_error);
  // marginal in u is exponential with rate 2/m (driftless)
  quad::QuadratureSpec spec;
  spec.abs_tol = 1e-11;
  for (double u : {0.2, 1.0}) {
    double q = quad::integrate([&](double t) { return joint_density_gap_max(kUnit, u, t); },
                               1e-14, 300.0, spec);
    CHECK(q == doctest::Approx(2.0 * std::exp(-2.0 * u)).epsilon(1e-7));
  }
  // drift-independence of the conditional gap law: for mu=-1 the u-marginal
  // is prob_T_finite * Exp(2/m) = Exp(2/m) (mass 1); check mean u = m/2
  ModelParams neg{1.0, -1.0};
  double mean_u = quad::integrate(
      [&](double u) {
        double inner = quad::integrate(
            [&](double t) { return joint_density_gap_max(neg, u, t); }, 1e-14, 200.0, spec);
        return u * inner;
      },
      1e-14, 20.0, spec);
  CHECK(mean_u == doctest::Approx(0.5).epsilon(1e-5));
}

TEST_CASE("running maximum / endpoint law at fixed time") {
  CHECK(joint_density_max_pos(1.0, 1.0, 0.0) ==
        doctest::Approx(0.21596386605275221).epsilon(1e-14));
  CHECK_THROWS_AS(joint_density_max_pos(1.0, -0.1, -0.2), domain_error);
  CHECK_THROWS_AS(joint_density_max_pos(1.0, 0.5, 0.6), domain_error);
  // normalization over {y >= 0, x <= y}
  quad::QuadratureSpec spec;
  spec.abs_tol = 1e-10;
  double mass = quad::integrate(
      [&](double y) {
        return quad::integrate(
            [&](double x) { return joint_density_max_pos(1.0, y, x); },
            y - 60.0, y, spec);
      },
      0.0, 40.0, spec);
  CHECK(mass == doctest::Approx(1.0).epsilon(1e-7));
}

TEST_CASE("pre-maximum split laws") {
  ModelParams neg{1.0, -1.0};
  CHECK(prob_T_before_rho(neg) == doctest::Approx(0.5));
  CHECK(prob_T_before_rho(ModelParams{1.0, -3.0}) == doctest::Approx(0.25));
  // continuity toward the driftless case: total mass -> 1 as mu -> 0-
  CHECK(prob_T_before_rho(ModelParams{1.0, -1e-9}) == doctest::Approx(1.0).epsilon(1e-8));
  CHECK_THROWS_AS(prob_T_before_rho(kUnit), regime_error);
  CHECK_THROWS_AS(density_T_before_rho(ModelParams{1.0, 0.5}, 1.0), regime_error);
  // marginal integrates to the total mass
  quad::QuadratureSpec spec;
  spec.abs_tol = 1e-11;
  double q = quad::integrate([&](double t) { return density_T_before_rho(neg, t); },
                             1e-14, 200.0, spec);
  CHECK(q == doctest::Approx(0.5).epsilon(1e-8));
  // joint marginalizes to the T marginal
  for (double t : {0.5, 1.2}) {
    double lo = -std::sqrt(1400.0 * t) - 2.0 * t;
    double qx = quad::integrate(
        [&](double x) { return joint_density_T_B_before_rho(neg, t, x); }, lo, t, spec);
    CHECK(qx == doctest::Approx(density_T_before_rho(neg, t)).epsilon(1e-9));
  }
  // complement laws are consistent
  CHECK(prob_T_after_rho(neg) == doctest::Approx(0.5));
  CHECK(density_T_after_rho(neg, 1.0) ==
        doctest::Approx(density_T(neg, 1.0) - density_T_before_rho(neg, 1.0)).epsilon(1e-14));
  double qa = quad::integrate([&](double t) { return density_T_after_rho(neg, t); },
                              1e-14, 200.0, spec);
  CHECK(qa == doctest::Approx(0.5).epsilon(1e-7));
}

TEST_CASE("ladder-process exponent and its inverse") {
  CHECK(laplace_exponent(2.0) == doctest::Approx(0.0));
  CHECK(laplace_exponent_inverse(0.0) == doctest::Approx(2.0));
  for (double a : {0.0, 0.3, 1.0, 4.0, 12.0}) {
    CHECK(laplace_exponent(laplace_exponent_inverse(a)) == doctest::Approx(a).epsilon(1e-12));
  }
  for (double l : {2.0, 2.5, 5.0, 11.0}) {
    CHECK(laplace_exponent_inverse(laplace_exponent(l)) == doctest::Approx(l).epsilon(1e-12));
  }
  CHECK_THROWS_AS(laplace_exponent(-0.1), domain_error);
  CHECK_THROWS_AS(laplace_exponent_inverse(-0.6), domain_error);
}

TEST_CASE("derivative identity for the base density") {
  // f1'(t) = -g(t)/t
  const double h = 1e-5;
  for (double t : {0.3, 1.0, 2.5}) {
    double fd = (f1(t + h) - f1(t - h)) / (2.0 * h);
    CHECK(fd == doctest::Approx(-special::gamma_half_pdf(t) / t).epsilon(1e-7));
  }
}

TEST_SUITE_END();
