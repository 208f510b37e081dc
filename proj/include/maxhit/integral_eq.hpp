#pragma once

#include <utility>
#include <vector>

#include "maxhit/grid_function.hpp"
#include "maxhit/quadrature.hpp"

namespace maxhit::integral_eq {

/// Boundary kernel psi0(t, x) = sqrt(2/pi) (2t-x) t^{-3/2} e^{-(2t-x)^2/(2t)}
/// for x < t; equals the fixed-time maximum/endpoint law on its diagonal.
double psi0(double t, double x);

/// Unit-slope joint density psi*(t, x), the candidate solved by the
/// integral equation h = psi0 - Lambda h.
double psi_star(double t, double x);

/// Hitting-kernel expectation in closed form:
/// A4(s, u, v) = (s+v)/(s u^{3/2}) exp(-(s+v)^2/(2u)) for s>0, u>0, v<=u.
double eval_A4_closed(double s, double u, double v);

/// Same quantity through the hitting-time convolution integral, evaluated
/// by adaptive quadrature (requires v > 0).  Must agree with the closed
/// form within the spec tolerance.
double eval_A4_quadrature(double s, double u, double v,
                          const quad::QuadratureSpec& spec = {});

/// A2(s, y) = A4(s-y, s, s) for y < s.
double eval_A2(double s, double y);

// --- the operator Lambda ----------------------------------------------------

/// (Lambda h)(t, x) for h tabulated on a grid; the inner x-integral is done
/// exactly per linear segment, the outer time integral adaptively.
double apply_lambda(const GridFunction2D& h, double t, double x,
                    const quad::QuadratureSpec& spec = {});

/// Fast paths with the inner integral in closed form for specific h.
/// `scale` multiplies h (Lambda is linear).
double apply_lambda_psi_star(double t, double x,
                             const quad::QuadratureSpec& spec = {},
                             double scale = 1.0);
double apply_lambda_psi0(double t, double x,
                         const quad::QuadratureSpec& spec = {});

/// Gaussian bump h(u,v) = exp(-((u-u0)^2 + (v-v0)^2)/(2 sigma^2)) 1_D.
struct GaussBump {
  double u0 = 2.0;
  double v0 = 0.0;
  double sigma = 0.5;
  double operator()(double u, double v) const;
};
double apply_lambda_bump(const GaussBump& b, double t, double x,
                         const quad::QuadratureSpec& spec = {});

// --- verification operations -------------------------------------------------

/// Default evaluation grid: t log-spaced on [0.1, 4] (8 values), x linearly
/// spaced on [-3, t - 0.05] (8 values per slice).
std::vector<std::pair<double, double>> default_residual_grid();

/// sup over the grid of |h + Lambda h - psi0| with h = h_scale * psi*.
/// h_scale = 1 certifies the equation; h_scale != 1 is the negative control.
double residual_ieq(const quad::QuadratureSpec& spec,
                    const std::vector<std::pair<double, double>>& grid,
                    double h_scale = 1.0);

/// Which h the transform-identity check runs on.
enum class TestFunction { psi_star, psi0_restricted, gauss_bump };

/// Both sides of the weighted-integral identity
///   int_D e^{-lambda t} (Lambda h)(t,x) dt dx
///     = 2/sqrt(1+2 lambda) int_D e^{-(lambda u + (u-v)(1+sqrt(1+2 lambda)))} h(u,v) du dv.
/// The left side is computed by nested quadrature of the actual operator.
std::pair<double, double> lemma43_check(TestFunction h, double lambda,
                                        const quad::QuadratureSpec& spec = {});

/// Contraction constant 2/sqrt(1+2 lambda) of the weighted-L1 estimate.
double contraction_constant(double lambda);

/// The lambda at which the constant reaches 1/2 (= 7.5).
double smallest_contraction_lambda();

/// Runs n_iter steps of h_{k+1} = psi0 - Lambda h_k on a grid starting from
/// h_0 = psi0 and returns the successive weighted-L1 distances
/// d_k = int e^{-lambda t} |h_{k+1} - h_k|.
std::vector<double> fixed_point_distances(double lambda, int n_iter,
                                          const quad::QuadratureSpec& spec = {});

}  // namespace maxhit::integral_eq
