#pragma once

#include <functional>
#include <vector>

namespace maxhit::quad {

enum class Scheme { adaptive_subdivision, fixed_tensor_gauss };

/// Tolerances, budget and domain-truncation cutoffs for the numeric
/// integration machinery.  Cutoffs are chosen so that the truncated
/// Gaussian-tail mass stays below abs_tol/10 for the kernels in use.
struct QuadratureSpec {
  Scheme scheme = Scheme::adaptive_subdivision;
  double abs_tol = 1e-9;
  double rel_tol = 1e-9;
  int max_depth = 48;
  double t_max = 12.0;   // upper truncation of the time variable
  double x_min = -8.0;   // lower truncation of the space variable

  void validate() const;
};

/// Gauss-Legendre nodes and weights on [-1, 1], computed once per order.
const std::vector<double>& gl_nodes(int n);
const std::vector<double>& gl_weights(int n);

/// Fixed n-point Gauss-Legendre rule on [a, b].
double gauss_legendre(const std::function<double(double)>& f, double a,
                      double b, int n);

/// Adaptive integration on [a, b] by recursive bisection with an embedded
/// GL10/GL21 error estimate.  Throws quadrature_error when the local error
/// cannot be brought under tolerance within max_depth levels.
double integrate(const std::function<double(double)>& f, double a, double b,
                 const QuadratureSpec& spec = {});

/// Adaptive integration on [a, +inf) via the substitution x = a + s/(1-s).
/// The integrand must decay at infinity.
double integrate_upper(const std::function<double(double)>& f, double a,
                       const QuadratureSpec& spec = {});

/// Fixed tensor Gauss rule over the rectangle [ax,bx] x [ay,by].
double tensor_gauss2d(const std::function<double(double, double)>& f,
                      double ax, double bx, double ay, double by, int n);

}  // namespace maxhit::quad
