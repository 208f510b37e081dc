#include "maxhit/integral_eq.hpp"

#include <algorithm>
#include <cmath>

#include "maxhit/errors.hpp"
#include "maxhit/special.hpp"

namespace maxhit::integral_eq {

namespace {
constexpr double kSqrt2OverPi = 0.7978845608028653558798921198687637;
}

double psi0(double t, double x) {
  if (!(t > 0.0) || !(x < t)) throw domain_error("psi0: requires t > 0 and x < t");
  double w = 2.0 * t - x;
  return kSqrt2OverPi * w * std::pow(t, -1.5) * std::exp(-w * w / (2.0 * t));
}

double psi_star(double t, double x) {
  if (!(t > 0.0)) throw domain_error("psi_star: t must be positive");
  double lead = t - x;
  if (lead <= 0.0) return 0.0;
  double w = 2.0 * t - x;
  return lead / t * std::sqrt(2.0 / (M_PI * t)) * std::exp(-w * w / (2.0 * t));
}

double eval_A4_closed(double s, double u, double v) {
  if (!(s > 0.0) || !(u > 0.0) || !(v <= u))
    throw domain_error("eval_A4_closed: requires s > 0, u > 0, v <= u");
  double sv = s + v;
  return sv / (s * std::pow(u, 1.5)) * std::exp(-sv * sv / (2.0 * u));
}

double eval_A4_quadrature(double s, double u, double v,
                          const quad::QuadratureSpec& spec) {
  if (!(v > 0.0)) throw domain_error("eval_A4_quadrature: requires v > 0");
  if (!(s > 0.0) || !(u > 0.0) || !(v <= u))
    throw domain_error("eval_A4_quadrature: requires s > 0, u > 0, v <= u");
  // convolution of the level-v hitting density with the squared-level kernel
  auto f = [&](double th) {
    double rem = u - th;
    if (rem <= 0.0 || th <= 0.0) return 0.0;
    double e = -s * s / (2.0 * rem) - v * v / (2.0 * th);
    if (e < -745.0) return 0.0;
    return std::pow(rem, -1.5) * v / std::sqrt(2.0 * M_PI * th * th * th) *
           std::exp(e);
  };
  return quad::integrate(f, 0.0, u, spec);
}

double eval_A2(double s, double y) {
  if (!(s > 0.0) || !(y < s)) throw domain_error("eval_A2: requires s > 0, y < s");
  double w = 2.0 * s - y;
  return w / ((s - y) * std::pow(s, 1.5)) * std::exp(-w * w / (2.0 * s));
}

namespace {

// Integrals int_0^inf y^k e^{-a y^2 - b y} dy scaled by e^{-b^2/(4a)}:
//   G0h = e^{-b^2/4a} G0, etc.  With this scaling no exponential blows up
// and the recurrences stay stable for every beta that matters (values
// underflow to an exact 0 past beta ~ 27, where the true contribution is
// below 1e-300 anyway).
struct HattedG {
  double g0, g1, g2;
};

HattedG hatted_g(double a, double b) {
  double beta = b / (2.0 * std::sqrt(a));
  double E = (beta * beta > 745.0) ? 0.0 : std::exp(-beta * beta);
  double erfcb = std::erfc(beta);
  HattedG g;
  g.g0 = 0.5 * std::sqrt(M_PI / a) * erfcb;
  g.g1 = (E - b * g.g0) / (2.0 * a);
  g.g2 = (g.g0 - b * g.g1) / (2.0 * a);
  return g;
}

// Inner x-integral of the operator kernel against psi*(u, .) in closed form.
// With y = w - w0, w0 = 2t - x - u, tau = t - u:
//   J(u) = tau^{-3/2} sqrt(2/(pi u)) u^{-1} e^{-(w0-u)^2/(2t)} (G2h + w0 G1h)
// where a = t/(2 u tau), b = w0/tau + 1.
double j_psi_star(double u, double t, double x) {
  double tau = t - u;
  if (tau <= 0.0 || u <= 0.0) return 0.0;
  double w0 = 2.0 * t - x - u;
  double a = t / (2.0 * u * tau);
  double b = w0 / tau + 1.0;
  double d = w0 - u;
  double scale_e = -d * d / (2.0 * t);
  if (scale_e < -745.0) return 0.0;
  HattedG g = hatted_g(a, b);
  double val = g.g2 + w0 * g.g1;
  if (val <= 0.0) return 0.0;
  return std::pow(tau, -1.5) * std::sqrt(2.0 / (M_PI * u)) / u *
         std::exp(scale_e) * val;
}

// Same for h = psi0: prefactor polynomial (y + w0)(y + u).
double j_psi0(double u, double t, double x) {
  double tau = t - u;
  if (tau <= 0.0 || u <= 0.0) return 0.0;
  double w0 = 2.0 * t - x - u;
  double a = t / (2.0 * u * tau);
  double b = w0 / tau + 1.0;
  double d = w0 - u;
  double scale_e = -d * d / (2.0 * t);
  if (scale_e < -745.0) return 0.0;
  HattedG g = hatted_g(a, b);
  double val = g.g2 + (w0 + u) * g.g1 + w0 * u * g.g0;
  if (val <= 0.0) return 0.0;
  return std::pow(tau, -1.5) * kSqrt2OverPi * std::pow(u, -1.5) *
         std::exp(scale_e) * val;
}

// h = Gaussian bump.  The kernel Gaussian and the bump Gaussian in v merge
// into one quadratic in y; the completed-square value is >= 0 so the scale
// factor cannot overflow.
double j_bump(double u, double t, double x, const GaussBump& bp) {
  double tau = t - u;
  if (tau <= 0.0 || u <= 0.0) return 0.0;
  double w0 = 2.0 * t - x - u;
  double s2 = bp.sigma * bp.sigma;
  double d = u - bp.v0;
  double a = 0.5 / tau + 0.5 / s2;
  double b = w0 / tau - d / s2;
  double c = w0 * w0 / (2.0 * tau) + d * d / (2.0 * s2) +
             (u - bp.u0) * (u - bp.u0) / (2.0 * s2);
  double scale_e = b * b / (4.0 * a) - c;
  if (scale_e < -745.0) return 0.0;
  HattedG g = hatted_g(a, b);
  double val = g.g1 + w0 * g.g0;
  if (val <= 0.0) return 0.0;
  return std::pow(tau, -1.5) * std::exp(scale_e) * val;
}

// Exact integrals of w e^{-w^2/(2 tau)} and w^2 e^{-w^2/(2 tau)} over [wa, wb].
double seg_I0(double wa, double wb, double tau) {
  auto e = [&](double w) {
    double q = w * w / (2.0 * tau);
    return q > 745.0 ? 0.0 : std::exp(-q);
  };
  return tau * (e(wa) - e(wb));
}

double seg_I1(double wa, double wb, double tau) {
  auto e = [&](double w) {
    double q = w * w / (2.0 * tau);
    return q > 745.0 ? 0.0 : std::exp(-q);
  };
  double s = std::sqrt(2.0 * tau);
  return tau * (wa * e(wa) - wb * e(wb)) +
         tau * std::sqrt(M_PI * tau / 2.0) * (std::erf(wb / s) - std::erf(wa / s));
}

// Inner integral for tabulated h: piecewise linear in v, exact per segment.
// The last tabulated segment is linearly extrapolated up to v = u, clamped
// at zero if the extension goes negative.
double j_grid(double u, double t, double x, const GridFunction2D& h,
              std::vector<double>& xs, std::vector<double>& vs) {
  double tau = t - u;
  if (tau <= 0.0 || u <= 0.0) return 0.0;
  if (!h.slice(u, xs, vs)) return 0.0;
  const double base = 2.0 * t - x;
  double acc = 0.0;
  size_t n = xs.size();
  auto add_segment = [&](double va, double vb, double ha, double hb) {
    if (vb <= va) return;
    // h(v) = alpha + beta v  ->  in w = base - v:  h = A + B w
    double beta = (hb - ha) / (vb - va);
    double alpha = ha - beta * va;
    double A = alpha + beta * base;
    double B = -beta;
    double wa = base - vb;  // w decreasing in v
    double wb = base - va;
    acc += A * seg_I0(wa, wb, tau) + B * seg_I1(wa, wb, tau);
  };
  for (size_t j = 0; j + 1 < n; ++j)
    add_segment(xs[j], xs[j + 1], vs[j], vs[j + 1]);
  // extrapolation sliver (u - eps, u]
  if (n >= 2 && u > xs[n - 1]) {
    double va = xs[n - 1], vb = u;
    double slope = (vs[n - 1] - vs[n - 2]) / (xs[n - 1] - xs[n - 2]);
    double hb = vs[n - 1] + slope * (vb - va);
    if (hb < 0.0) {
      double vz = va - vs[n - 1] / slope;  // zero crossing (slope < 0 here)
      if (vz > va && vz < vb) add_segment(va, vz, vs[n - 1], 0.0);
    } else {
      add_segment(va, vb, vs[n - 1], hb);
    }
  }
  if (acc <= 0.0) return 0.0;
  return std::pow(tau, -1.5) * acc;
}

// Outer time integral with the u = q^2 substitution taming the u^{-1/2}
// endpoint, split at interior breakpoints.
double outer_integral(const std::function<double(double)>& J, double t,
                      const quad::QuadratureSpec& spec,
                      const std::vector<double>& breaks = {}) {
  auto g = [&](double q) { return 2.0 * q * J(q * q); };
  std::vector<double> qs;
  qs.push_back(0.0);
  for (double b : breaks)
    if (b > 0.0 && b < t) qs.push_back(std::sqrt(b));
  qs.push_back(std::sqrt(t));
  std::sort(qs.begin(), qs.end());
  double total = 0.0;
  for (size_t i = 0; i + 1 < qs.size(); ++i)
    total += quad::integrate(g, qs[i], qs[i + 1], spec);
  return total;
}

}  // namespace

double GaussBump::operator()(double u, double v) const {
  if (!(u > 0.0) || !(v < u)) return 0.0;
  double du = u - u0, dv = v - v0;
  return std::exp(-(du * du + dv * dv) / (2.0 * sigma * sigma));
}

double apply_lambda(const GridFunction2D& h, double t, double x,
                    const quad::QuadratureSpec& spec) {
  if (!(t > 0.0) || !(x < t)) throw domain_error("apply_lambda: (t,x) outside domain");
  std::vector<double> xs, vs;
  auto J = [&](double u) { return j_grid(u, t, x, h, xs, vs); };
  std::vector<double> breaks(h.t_nodes());
  return kSqrt2OverPi * outer_integral(J, t, spec, breaks);
}

double apply_lambda_psi_star(double t, double x, const quad::QuadratureSpec& spec,
                             double scale) {
  if (!(t > 0.0) || !(x < t))
    throw domain_error("apply_lambda_psi_star: (t,x) outside domain");
  auto J = [&](double u) { return j_psi_star(u, t, x); };
  return scale * kSqrt2OverPi * outer_integral(J, t, spec);
}

double apply_lambda_psi0(double t, double x, const quad::QuadratureSpec& spec) {
  if (!(t > 0.0) || !(x < t))
    throw domain_error("apply_lambda_psi0: (t,x) outside domain");
  auto J = [&](double u) { return j_psi0(u, t, x); };
  return kSqrt2OverPi * outer_integral(J, t, spec);
}

double apply_lambda_bump(const GaussBump& b, double t, double x,
                         const quad::QuadratureSpec& spec) {
  if (!(t > 0.0) || !(x < t))
    throw domain_error("apply_lambda_bump: (t,x) outside domain");
  auto J = [&](double u) { return j_bump(u, t, x, b); };
  return kSqrt2OverPi * outer_integral(J, t, spec);
}

std::vector<std::pair<double, double>> default_residual_grid() {
  std::vector<std::pair<double, double>> pts;
  const int nt = 8, nx = 8;
  for (int i = 0; i < nt; ++i) {
    double t = 0.1 * std::pow(40.0, i / double(nt - 1));
    for (int j = 0; j < nx; ++j) {
      double x = -3.0 + (t - 0.05 + 3.0) * j / double(nx - 1);
      pts.emplace_back(t, x);
    }
  }
  return pts;
}

double residual_ieq(const quad::QuadratureSpec& spec,
                    const std::vector<std::pair<double, double>>& grid,
                    double h_scale) {
  double sup = 0.0;
  for (auto [t, x] : grid) {
    double r = std::fabs(h_scale * psi_star(t, x) +
                         apply_lambda_psi_star(t, x, spec, h_scale) - psi0(t, x));
    sup = std::max(sup, r);
  }
  return sup;
}

double contraction_constant(double lambda) {
  if (lambda < 0.0) throw domain_error("contraction_constant: lambda must be >= 0");
  return 2.0 / std::sqrt(1.0 + 2.0 * lambda);
}

double smallest_contraction_lambda() { return 7.5; }

std::pair<double, double> lemma43_check(TestFunction hf, double lambda,
                                        const quad::QuadratureSpec& spec) {
  if (lambda < 0.0) throw domain_error("lemma43_check: lambda must be >= 0");
  const double kappa = 1.0 + std::sqrt(1.0 + 2.0 * lambda);
  quad::QuadratureSpec inner = spec;
  inner.abs_tol = std::max(spec.abs_tol * 0.1, 1e-12);

  auto lam_at = [&](double t, double x) {
    switch (hf) {
      case TestFunction::psi_star:
        return apply_lambda_psi_star(t, x, inner);
      case TestFunction::psi0_restricted:
        return apply_lambda_psi0(t, x, inner);
      case TestFunction::gauss_bump:
        return apply_lambda_bump(GaussBump{}, t, x, inner);
    }
    return 0.0;
  };
  auto h_at = [&](double u, double v) {
    switch (hf) {
      case TestFunction::psi_star:
        return psi_star(u, v);
      case TestFunction::psi0_restricted:
        return v < u ? psi0(u, v) : 0.0;
      case TestFunction::gauss_bump:
        return GaussBump{}(u, v);
    }
    return 0.0;
  };

  // left side: nested quadrature of the actual operator values
  auto lhs_slice = [&](double t) {
    auto f = [&](double x) { return lam_at(t, x); };
    return std::exp(-lambda * t) *
           quad::integrate(f, spec.x_min, t - 1e-9, spec);
  };
  double lhs = quad::integrate(lhs_slice, 1e-9, spec.t_max, spec);

  // right side: weighted integral of h itself
  auto rhs_slice = [&](double u) {
    auto f = [&](double y) {  // y = u - v > 0
      double e = -kappa * y;
      if (e < -745.0) return 0.0;
      return std::exp(e) * h_at(u, u - y);
    };
    double y_hi = 745.0 / kappa + 20.0;
    return std::exp(-lambda * u) * quad::integrate(f, 0.0, y_hi, spec);
  };
  double rhs = 2.0 / std::sqrt(1.0 + 2.0 * lambda) *
               quad::integrate(rhs_slice, 1e-9, spec.t_max, spec);
  return {lhs, rhs};
}

std::vector<double> fixed_point_distances(double lambda, int n_iter,
                                          const quad::QuadratureSpec& spec) {
  std::vector<double> t_nodes;
  const int nt = 8, nx = 8;
  for (int i = 0; i < nt; ++i) t_nodes.push_back(0.1 * std::pow(40.0, i / double(nt - 1)));
  GridFunction2D h(t_nodes, nx, -3.0);
  h.fill([](double t, double x) { return psi0(t, x); });

  auto weighted_l1 = [&](const GridFunction2D& a, const GridFunction2D& b) {
    // trapezoid over the (non-uniform) grid of e^{-lambda t} |a - b|
    double total = 0.0;
    for (int i = 0; i + 1 < nt; ++i) {
      double dt = t_nodes[i + 1] - t_nodes[i];
      for (int which : {i, i + 1}) {
        double t = t_nodes[which];
        double step = (t - h.eps() + 3.0) / (nx - 1);
        double slice_sum = 0.0;
        for (int j = 0; j < nx; ++j) {
          double w = (j == 0 || j == nx - 1) ? 0.5 : 1.0;
          slice_sum += w * std::fabs(a.value_at(which, j) - b.value_at(which, j));
        }
        total += 0.5 * dt * std::exp(-lambda * t) * slice_sum * step;
      }
    }
    return total;
  };

  std::vector<double> dists;
  GridFunction2D prev = h;
  for (int k = 0; k < n_iter; ++k) {
    GridFunction2D next = h;
    for (int i = 0; i < nt; ++i) {
      for (int j = 0; j < nx; ++j) {
        double t = t_nodes[i];
        double x = next.x_node(i, j);
        double v = psi0(t, x) - apply_lambda(prev, t, x, spec);
        next.set_value(i, j, v < 0.0 ? 0.0 : v);
      }
    }
    dists.push_back(weighted_l1(next, prev));
    prev = next;
  }
  return dists;
}

}  // namespace maxhit::integral_eq
