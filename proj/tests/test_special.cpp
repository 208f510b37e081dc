#include <doctest.h>

#include <cmath>

#include "maxhit/special.hpp"

using namespace maxhit::special;

TEST_SUITE_BEGIN("special");

TEST_CASE("erfcx agrees with direct product at moderate arguments") {
  for (double x : {0.0, 0.3, 1.0, 4.0, 10.0, 25.0}) {
    CHECK(erfcx(x) == doctest::Approx(std::exp(x * x) * std::erfc(x)).epsilon(1e-13));
  }
  // asymptotic regime: compare against the leading series 1/(x sqrt(pi)) (1 - 1/(2x^2) + 3/(4x^4))
  double x = 50.0;
  double series = (1.0 - 0.5 / (x * x) + 0.75 / (x * x * x * x)) / (x * std::sqrt(M_PI));
  CHECK(erfcx(x) == doctest::Approx(series).epsilon(1e-9));
  // reflection
  CHECK(erfcx(-1.0) == doctest::Approx(2.0 * std::exp(1.0) - erfcx(1.0)).epsilon(1e-14));
}

TEST_CASE("normal quantile inverts the CDF") {
  for (double p : {1e-8, 0.001, 0.01, 0.3, 0.5, 0.7, 0.99, 0.999, 1 - 1e-8}) {
    double x = norm_quantile(p);
    CHECK(norm_cdf(x) == doctest::Approx(p).epsilon(1e-10));
  }
  CHECK(norm_quantile(0.5) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK_THROWS_AS(norm_quantile(0.0), std::domain_error);
}

TEST_CASE("regularized incomplete gamma") {
  // P(1/2, x) = erf(sqrt(x))
  for (double x : {0.01, 0.5, 1.0, 3.0, 10.0}) {
    CHECK(gamma_p(0.5, x) == doctest::Approx(std::erf(std::sqrt(x))).epsilon(1e-12));
  }
  // P(1, x) = 1 - e^{-x}
  CHECK(gamma_p(1.0, 2.0) == doctest::Approx(1.0 - std::exp(-2.0)).epsilon(1e-12));
  // chi-squared sf with 2 dof is e^{-x/2}
  CHECK(chisq_sf(2.0, 3.0) == doctest::Approx(std::exp(-1.5)).epsilon(1e-12));
  CHECK(gamma_p(0.5, 0.0) == 0.0);
  CHECK(gamma_q(0.5, 0.0) == 1.0);
}

TEST_CASE("Kolmogorov survival function") {
  // frozen reference: Q(1) = 2 sum (-1)^{j-1} e^{-2 j^2} = 0.26999967167735452
  CHECK(kolmogorov_sf(1.0) == doctest::Approx(0.26999967167735452).epsilon(1e-10));
  // both series branches must agree where they overlap
  for (double lam : {0.9, 1.0, 1.1, 1.2, 1.3}) {
    double direct = 0.0, sign = 1.0;
    for (int j = 1; j <= 60; ++j) {
      direct += sign * std::exp(-2.0 * j * j * lam * lam);
      sign = -sign;
    }
    direct *= 2.0;
    CHECK(kolmogorov_sf(lam) == doctest::Approx(direct).epsilon(1e-8));
  }
  CHECK(kolmogorov_sf(0.0) == 1.0);
  CHECK(kolmogorov_sf(5.0) < 1e-20);
  CHECK(kolmogorov_sf(0.2) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("gamma-half density and cdf") {
  // density of Z^2: at t=1, 2*phi(1) where phi is the normal pdf
  CHECK(gamma_half_pdf(1.0) == doctest::Approx(std::exp(-0.5) / std::sqrt(2 * M_PI)).epsilon(1e-14));
  CHECK(gamma_half_cdf(1.0) == doctest::Approx(std::erf(std::sqrt(0.5))).epsilon(1e-14));
  CHECK(gamma_shape_half_cdf(2.0, 1.0) == doctest::Approx(std::erf(std::sqrt(2.0))).epsilon(1e-14));
}

TEST_SUITE_END();
