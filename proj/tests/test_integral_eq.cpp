#include <doctest.h>

#include <cmath>

#include "maxhit/analytic.hpp"
#include "maxhit/errors.hpp"
#include "maxhit/integral_eq.hpp"

using namespace maxhit;
using namespace maxhit::integral_eq;

TEST_SUITE_BEGIN("integral_eq");

TEST_CASE("boundary kernel values") {
  // frozen: 2 sqrt(2/pi) e^{-2}
  CHECK(psi0(1.0, 0.0) == doctest::Approx(0.21596386605275221).epsilon(1e-14));
  // diagonal match with the fixed-time maximum law at y = t
  for (double t : {0.3, 1.0, 2.0}) {
    for (double x : {-1.0, 0.0, 0.5 * t}) {
      CHECK(psi0(t, x) ==
            doctest::Approx(analytic::joint_density_max_pos(t, t, x)).epsilon(1e-14));
    }
  }
  // substitution limit x -> t: sqrt(2/pi) t^{-1/2} e^{-t/2}
  double t = 1.7;
  CHECK(psi0(t, t - 1e-12) ==
        doctest::Approx(std::sqrt(2.0 / (M_PI * t)) * std::exp(-0.5 * t)).epsilon(1e-9));
  CHECK_THROWS_AS(psi0(1.0, 1.0), domain_error);
  // psi0 = sqrt(2/pi) (t-x) A2(t,x)
  CHECK(psi0(1.0, -0.5) ==
        doctest::Approx(std::sqrt(2.0 / M_PI) * 1.5 * eval_A2(1.0, -0.5)).epsilon(1e-13));
  // psi* matches the analytic unit joint density
  for (double x : {-2.0, 0.0, 0.9}) {
    CHECK(psi_star(1.0, x) ==
          doctest::Approx(analytic::joint_density_T_B({1.0, 0.0}, 1.0, x)).epsilon(1e-14));
  }
}

TEST_CASE("A4 closed form") {
  CHECK(eval_A4_closed(1.0, 1.0, 1.0) ==
        doctest::Approx(0.27067056647322538).epsilon(1e-14));
  // v = 0 reduction: (1/u^{3/2}) e^{-s^2/(2u)}
  CHECK(eval_A4_closed(2.0, 3.0, 0.0) ==
        doctest::Approx(std::pow(3.0, -1.5) * std::exp(-4.0 / 6.0)).epsilon(1e-14));
  CHECK_THROWS_AS(eval_A4_closed(1.0, 1.0, 1.5), domain_error);
}

TEST_CASE("A2 values and tie-ins") {
  CHECK(eval_A2(1.0, 0.0) == doctest::Approx(2.0 * std::exp(-2.0)).epsilon(1e-14));
  // frozen plug-in (3/2^{3/2}) e^{-9/4}
  CHECK(eval_A2(2.0, 1.0) == doctest::Approx(0.11179275962924699).epsilon(1e-13));
  // A2(s, y) = A4(s - y, s, s)
  for (double s : {0.7, 1.0, 2.5}) {
    for (double y : {-1.0, 0.0, 0.5 * s}) {
      CHECK(eval_A2(s, y) == doctest::Approx(eval_A4_closed(s - y, s, s)).epsilon(1e-13));
    }
  }
  CHECK_THROWS_AS(eval_A2(1.0, 1.0), domain_error);
}

TEST_CASE("A4 quadrature route matches the closed form") {
  quad::QuadratureSpec spec;
  spec.abs_tol = 1e-12;
  spec.rel_tol = 1e-12;
  const double grid[] = {0.25, 0.5, 1.0, 2.0, 4.0};
  for (double s : grid)
    for (double u : grid)
      for (double v : grid) {
        if (v > u) continue;
        double c = eval_A4_closed(s, u, v);
        double q = eval_A4_quadrature(s, u, v, spec);
        CHECK(std::fabs(q - c) < 1e-8);
      }
  // continuity toward v = 0
  double lim = eval_A4_closed(1.0, 1.0, 0.0);
  CHECK(eval_A4_quadrature(1.0, 1.0, 1e-5, spec) == doctest::Approx(lim).epsilon(1e-3));
  CHECK_THROWS_AS(eval_A4_quadrature(1.0, 1.0, 0.0, spec), domain_error);
}

TEST_CASE("operator on the zero function and linearity") {
  std::vector<double> tn = {0.1, 0.5, 1.0, 2.0, 4.0};
  GridFunction2D zero(tn, 6, -3.0);
  CHECK(apply_lambda(zero, 1.0, 0.0) == 0.0);

  GridFunction2D h(tn, 8, -3.0);
  h.fill([](double t, double x) { return psi_star(t, x); });
  GridFunction2D h2(tn, 8, -3.0);
  h2.fill([](double t, double x) { return 2.0 * psi_star(t, x); });
  quad::QuadratureSpec spec;
  spec.abs_tol = 1e-10;
  double a = apply_lambda(h, 1.0, 0.0, spec);
  double b = apply_lambda(h2, 1.0, 0.0, spec);
  CHECK(b == doctest::Approx(2.0 * a).epsilon(1e-10));
}

TEST_CASE("closed-form inner integral agrees with the grid route") {
  // fine grid representation of psi* should reproduce the closed-form path
  std::vector<double> tn;
  for (int i = 0; i <= 60; ++i) tn.push_back(0.02 + (6.0 - 0.02) * i / 60.0);
  GridFunction2D h(tn, 80, -6.0);
  h.fill([](double t, double x) { return psi_star(t, x); });
  quad::QuadratureSpec spec;
  spec.abs_tol = 1e-10;
  for (auto [t, x] : {std::pair{1.0, 0.0}, {2.0, -1.0}, {0.5, 0.2}}) {
    double grid_route = apply_lambda(h, t, x, spec);
    double closed_route = apply_lambda_psi_star(t, x, spec);
    CHECK(grid_route == doctest::Approx(closed_route).epsilon(2e-3));
  }
}

TEST_CASE("psi* solves the integral equation at spot points") {
  quad::QuadratureSpec spec;
  spec.abs_tol = 1e-9;
  for (auto [t, x] : {std::pair{1.0, 0.0}, {0.3, -0.7}, {2.0, 1.5}, {4.0, -3.0}}) {
    double r = psi_star(t, x) + apply_lambda_psi_star(t, x, spec) - psi0(t, x);
    CHECK(std::fabs(r) < 1e-6);
  }
}

TEST_CASE("residual of the integral equation over the default grid") {
  quad::QuadratureSpec spec;
  spec.abs_tol = 1e-9;
  double r = residual_ieq(spec, default_residual_grid());
  CHECK(r <= 1e-6);
  // negative control: a rescaled candidate does not solve the equation
  double rneg = residual_ieq(spec, default_residual_grid(), 0.9);
  CHECK(rneg > 1e-3);
}

TEST_CASE("single-point residual") {
  quad::QuadratureSpec spec;
  spec.abs_tol = 1e-9;
  double r = residual_ieq(spec, {{1.0, 0.0}});
  CHECK(r <= 1e-6);
}

TEST_CASE("weighted-transform identity of the operator") {
  quad::QuadratureSpec spec;
  spec.abs_tol = 1e-10;
  spec.rel_tol = 1e-8;
  spec.t_max = 30.0;
  auto [lhs, rhs] = lemma43_check(TestFunction::psi_star, 1.0, spec);
  CHECK(std::fabs(lhs - rhs) / rhs < 1e-5);
  // lambda = 0 ties to normalization: integral of Lambda psi* equals
  // integral of psi0 (= 2) minus integral of psi* (= 1)
  auto [l0, r0] = lemma43_check(TestFunction::psi_star, 0.0, spec);
  CHECK(l0 == doctest::Approx(1.0).epsilon(1e-4));
  CHECK(r0 == doctest::Approx(1.0).epsilon(1e-4));
}

TEST_CASE("contraction constant") {
  CHECK(contraction_constant(0.0) == doctest::Approx(2.0));
  CHECK(contraction_constant(7.5) == doctest::Approx(0.5));
  CHECK(contraction_constant(12.0) == doctest::Approx(0.4));
  CHECK(smallest_contraction_lambda() == doctest::Approx(7.5));
  CHECK(contraction_constant(smallest_contraction_lambda()) == doctest::Approx(0.5));
  CHECK_THROWS_AS(contraction_constant(-1.0), domain_error);
}

TEST_CASE("fixed-point iteration contracts in the weighted norm") {
  quad::QuadratureSpec spec;
  spec.abs_tol = 1e-9;
  auto d = fixed_point_distances(7.5, 4, spec);
  REQUIRE(d.size() == 4);
  for (size_t k = 1; k < d.size(); ++k) {
    if (d[k - 1] > 1e-14) {
      CHECK(d[k] / d[k - 1] <= 0.55);
    }
  }
}

TEST_SUITE_END();
