#include "maxhit/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>

#include "maxhit/errors.hpp"

namespace maxhit::quad {

void QuadratureSpec::validate() const {
  if (abs_tol <= 0.0 || rel_tol <= 0.0)
    throw config_error("QuadratureSpec: tolerances must be positive");
  if (max_depth < 1) throw config_error("QuadratureSpec: max_depth must be >= 1");
  if (t_max <= 0.0 || x_min >= 0.0)
    throw config_error("QuadratureSpec: cutoffs t_max > 0 > x_min required");
}

namespace {

struct Rule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// Legendre polynomial roots by Newton iteration on the three-term recurrence.
Rule make_gl_rule(int n) {
  Rule r;
  r.nodes.resize(n);
  r.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
      }
      pp = n * (x * p0 - p1) / (x * x - 1.0);
      double dx = p0 / pp;
      x -= dx;
      if (std::fabs(dx) < 1e-16) break;
    }
    r.nodes[i] = -x;
    r.nodes[n - 1 - i] = x;
    double w = 2.0 / ((1.0 - x * x) * pp * pp);
    r.weights[i] = w;
    r.weights[n - 1 - i] = w;
  }
  return r;
}

const Rule& rule_for(int n) {
  static std::mutex mtx;
  static std::map<int, Rule> cache;
  std::lock_guard<std::mutex> lock(mtx);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, make_gl_rule(n)).first;
  return it->second;
}

double apply_rule(const Rule& r, const std::function<double(double)>& f,
                  double a, double b) {
  double half = 0.5 * (b - a), mid = 0.5 * (a + b);
  double sum = 0.0;
  for (size_t i = 0; i < r.nodes.size(); ++i)
    sum += r.weights[i] * f(mid + half * r.nodes[i]);
  return sum * half;
}

struct AdaptiveCtx {
  const std::function<double(double)>* f;
  double abs_tol;
  double rel_tol;
  int max_depth;
  double global_scale;  // running |integral| estimate for relative tolerance
};

double adapt(AdaptiveCtx& ctx, double a, double b, double tol, int depth) {
  const Rule& coarse = rule_for(10);
  const Rule& fine = rule_for(21);
  double c10 = apply_rule(coarse, *ctx.f, a, b);
  double c21 = apply_rule(fine, *ctx.f, a, b);
  double err = std::fabs(c21 - c10);
  double goal = std::max(tol, ctx.rel_tol * std::fabs(ctx.global_scale));
  if (err <= goal || (b - a) < 1e-15 * (std::fabs(a) + std::fabs(b) + 1.0)) {
    return c21;
  }
  if (depth >= ctx.max_depth) {
    throw quadrature_error("adaptive quadrature: tolerance not met within depth budget");
  }
  double mid = 0.5 * (a + b);
  double left = adapt(ctx, a, mid, 0.5 * tol, depth + 1);
  double right = adapt(ctx, mid, b, 0.5 * tol, depth + 1);
  return left + right;
}

}  // namespace

const std::vector<double>& gl_nodes(int n) { return rule_for(n).nodes; }
const std::vector<double>& gl_weights(int n) { return rule_for(n).weights; }

double gauss_legendre(const std::function<double(double)>& f, double a,
                      double b, int n) {
  return apply_rule(rule_for(n), f, a, b);
}

double integrate(const std::function<double(double)>& f, double a, double b,
                 const QuadratureSpec& spec) {
  if (a == b) return 0.0;
  AdaptiveCtx ctx{&f, spec.abs_tol, spec.rel_tol, spec.max_depth, 0.0};
  ctx.global_scale = apply_rule(rule_for(21), f, a, b);
  return adapt(ctx, a, b, spec.abs_tol, 0);
}

double integrate_upper(const std::function<double(double)>& f, double a,
                       const QuadratureSpec& spec) {
  auto g = [&](double s) {
    double om = 1.0 - s;
    double x = a + s / om;
    double v = f(x);
    return v / (om * om);
  };
  // stay off s = 1 exactly; the integrand must have decayed by then
  return integrate(g, 0.0, 1.0 - 1e-12, spec);
}

double tensor_gauss2d(const std::function<double(double, double)>& f,
                      double ax, double bx, double ay, double by, int n) {
  const Rule& r = rule_for(n);
  double hx = 0.5 * (bx - ax), mx = 0.5 * (ax + bx);
  double hy = 0.5 * (by - ay), my = 0.5 * (ay + by);
  double sum = 0.0;
  for (size_t i = 0; i < r.nodes.size(); ++i) {
    double x = mx + hx * r.nodes[i];
    double row = 0.0;
    for (size_t j = 0; j < r.nodes.size(); ++j)
      row += r.weights[j] * f(x, my + hy * r.nodes[j]);
    sum += r.weights[i] * row;
  }
  return sum * hx * hy;
}

}  // namespace maxhit::quad
