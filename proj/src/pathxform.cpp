#include "maxhit/pathxform.hpp"

#include <algorithm>
#include <cmath>

#include "maxhit/analytic.hpp"
#include "maxhit/quadrature.hpp"
#include "maxhit/rng.hpp"

namespace maxhit::pathxform {

void DiscretePath::validate() const {
  if (!(dt > 0.0)) throw config_error("DiscretePath: dt must be positive");
  if (values.size() < 2) throw config_error("DiscretePath: need at least 2 values");
  if (values[0] != 0.0) throw config_error("DiscretePath: must start at 0");
  if (step_max.size() + 1 != values.size())
    throw config_error("DiscretePath: step_max size mismatch");
}

double DiscretePath::sup_marked() const {
  double s = 0.0;
  for (double m : step_max) s = std::max(s, m);
  return s;
}

double DiscretePath::sup_values() const {
  double s = 0.0;
  for (double v : values) s = std::max(s, v);
  return s;
}

DiscretePath simulate_discrete_path(double t, double dt, std::uint64_t seed,
                                    std::uint64_t stream, bool bridge) {
  if (!(t > 0.0) || !(dt > 0.0) || dt > t)
    throw config_error("simulate_discrete_path: need 0 < dt <= t");
  const long K = long(std::llround(t / dt));
  rng::Xoshiro256 g(seed, stream);
  DiscretePath p;
  p.dt = dt;
  p.values.resize(K + 1);
  p.step_max.resize(K);
  p.values[0] = 0.0;
  for (long k = 0; k < K; ++k) {
    double b0 = p.values[k];
    double b1 = b0 + std::sqrt(dt) * g.normal();
    double M;
    if (bridge) {
      double u = g.uniform_pos();
      double d = b1 - b0;
      M = 0.5 * (b0 + b1 + std::sqrt(d * d - 2.0 * dt * std::log(u)));
    } else {
      M = std::max(b0, b1);
    }
    p.values[k + 1] = b1;
    p.step_max[k] = M;
  }
  return p;
}

void BinSpec::validate() const {
  if (!(delta_t > 0.0) || !(delta_x > 0.0))
    throw config_error("BinSpec: bin widths must be positive");
}

Membership classify(const DiscretePath& path, double t, double x,
                    const BinSpec& bins) {
  path.validate();
  bins.validate();
  if (path.duration() < t - 1e-12)
    throw config_error("classify: path too short for time t");
  const long K = long(std::llround(t / path.dt));
  double sup = 0.0;
  bool early = false;
  for (long k = 0; k < K; ++k) {
    sup = std::max(sup, path.step_max[k]);
    double tk = (k + 1) * path.dt;
    if (tk < t - 1e-12 && sup < tk) early = true;
  }
  double endpoint = path.values[K];
  bool in_gamma = (sup >= t && sup < t + bins.delta_t) &&
                  (endpoint >= x && endpoint < x + bins.delta_x);
  if (!in_gamma) return Membership::neither;
  return early ? Membership::gamma_o : Membership::gamma_only;
}

CutTimes find_cut_times(const DiscretePath& path) {
  path.validate();
  const auto& v = path.values;
  const long K = long(v.size()) - 1;
  const double dt = path.dt;

  // first grid crossing of the value-based running maximum under the diagonal
  double smax = 0.0;
  long argmax = 0, k_hat = -1;
  for (long k = 1; k <= K; ++k) {
    if (v[k] > smax) {
      smax = v[k];
      argmax = k;
    }
    if (smax < k * dt) {
      k_hat = k;
      break;
    }
  }
  if (k_hat < 0)
    throw not_in_gamma_o_error("find_cut_times: no value-resolved diagonal crossing");

  // level of the straddling excursion = running max just before the crossing
  double s = 0.0;
  long i1 = 0;
  {
    double m2 = 0.0;
    for (long k = 0; k < k_hat; ++k) {
      if (v[k] > m2) {
        m2 = v[k];
        i1 = k;
      }
    }
    s = m2;
  }
  // first return of the values to the level after i1
  long i2 = -1;
  for (long k = i1 + 1; k <= K; ++k) {
    if (v[k] >= s) {
      i2 = k;
      break;
    }
  }
  if (i2 < 0)
    throw degenerate_excursion_error("find_cut_times: values never return to the excursion level");
  const long zeta = i2 - i1;
  if (zeta < 2)
    throw degenerate_excursion_error("find_cut_times: excursion shorter than 2 grid steps");

  // first attainment of the path's final value-maximum
  double vmax = 0.0;
  long i0 = 0;
  for (long k = 0; k <= K; ++k) {
    if (v[k] > vmax) {
      vmax = v[k];
      i0 = k;
    }
  }
  if (i0 <= i2)
    throw degenerate_excursion_error("find_cut_times: final maximum not attained after the excursion");

  // straddle index: grid point at (or just below) time = level s
  long k_idx = long(std::floor(s / dt)) - i1;
  k_idx = std::max(1L, std::min(zeta - 1, k_idx));
  double u = 2.0 * (s - v[i1 + k_idx]);
  if (!(u > 0.0))
    throw degenerate_excursion_error("find_cut_times: nonpositive straddle depth");

  CutTimes c;
  c.i1 = i1;
  c.i2 = i2;
  c.i0 = i0;
  c.k_idx = k_idx;
  c.tau1 = i1 * dt;
  c.tau2 = i2 * dt;
  c.tau0 = i0 * dt;
  c.s = s;
  c.u = u;
  (void)argmax;
  return c;
}

DiscretePath transform_path(const DiscretePath& path, const CutTimes& c) {
  path.validate();
  const auto& v = path.values;
  const long K = long(v.size()) - 1;
  const long i1 = c.i1, i2 = c.i2, i0 = c.i0, kx = c.k_idx;
  const long zeta = i2 - i1;
  if (!(0 <= i1 && i1 < i2 && i2 < i0 && i0 <= K))
    throw domain_error("transform_path: inconsistent cut indices");

  DiscretePath out;
  out.dt = path.dt;
  out.values.resize(K + 1);
  out.step_max.assign(K, 0.0);

  // prefix up to tau1
  for (long j = 0; j <= i1; ++j) out.values[j] = v[j];
  // [tau2, tau0] brought forward to tau1
  for (long j = 0; j <= i0 - i2; ++j) out.values[i1 + j] = v[i2 + j];
  // the excursion, reversed; the part before the straddle point reflected
  // about the level, the rest shifted up by u, attached at the old maximum
  const long e0 = i1 + (i0 - i2);
  const double base = v[i0];
  for (long jj = 0; jj <= zeta; ++jj) {
    double rel = v[i1 + (zeta - jj)] - c.s;
    out.values[e0 + jj] = (jj <= zeta - kx) ? base - rel : base + c.u + rel;
  }
  // tail shifted upward
  for (long j = i0; j <= K; ++j) out.values[j] = v[j] + c.u;

  // step marks for the rearranged path: endpoint maxima (bridge marks are
  // not transportable through reversal/reflection)
  for (long k = 0; k < K; ++k)
    out.step_max[k] = std::max(out.values[k], out.values[k + 1]);
  return out;
}

namespace {

struct BijAcc {
  long n = 0;
  long n_gamma = 0, n_gamma_o = 0, n_diag = 0;
  // per-path paired statistic A - B (density scale) for the a-vs-b z-score
  double d_sum = 0.0, d_sum2 = 0.0;
  void merge(const BijAcc& o) {
    n += o.n;
    n_gamma += o.n_gamma;
    n_gamma_o += o.n_gamma_o;
    n_diag += o.n_diag;
    d_sum += o.d_sum;
    d_sum2 += o.d_sum2;
  }
};

}  // namespace

BijectionReport bijection_check(double t, double x, const BinSpec& bins,
                                long n_paths, const mc::PathConfig& cfg) {
  bins.validate();
  if (!(t > 0.0)) throw config_error("bijection_check: t must be positive");
  const double dt = cfg.dt;
  if (!(dt > 0.0) || dt > t) throw config_error("bijection_check: need 0 < dt <= t");
  const long K = long(std::llround(t / dt));
  const double du = bins.delta_t;  // offset spacing ties to the max-bin width
  const long J = long(std::ceil((12.0 * std::sqrt(t) + 4.0) / du));
  const double inv_axx = 1.0 / (bins.delta_t * bins.delta_x);

  mc::PathConfig pc = cfg;
  pc.n_paths = n_paths;
  auto acc = mc::run_paths<BijAcc>(pc, [&](long, rng::Xoshiro256& g, BijAcc& a) {
    double b = 0.0, sup = 0.0;
    bool early = false;
    for (long k = 0; k < K; ++k) {
      double b1 = b + std::sqrt(dt) * g.normal();
      double M;
      if (pc.bridge_max_correction) {
        double uu = g.uniform_pos();
        double d = b1 - b;
        M = 0.5 * (b + b1 + std::sqrt(d * d - 2.0 * dt * std::log(uu)));
      } else {
        M = std::max(b, b1);
      }
      sup = std::max(sup, M);
      b = b1;
      double tk = (k + 1) * dt;
      if (tk < t - 1e-12 && sup < tk) early = true;
    }
    a.n++;
    double A = 0.0, B = 0.0;
    bool in_gamma = (sup >= t && sup < t + bins.delta_t) &&
                    (b >= x && b < x + bins.delta_x);
    if (in_gamma) {
      a.n_gamma++;
      if (early) {
        a.n_gamma_o++;
        A = inv_axx;
      }
    }
    if (sup >= t + du) {
      long j = long((sup - t) / du);
      if (j >= 1 && j <= J && b - x >= j * du && b - x < j * du + bins.delta_x) {
        a.n_diag++;
        B = du * inv_axx;
      }
    }
    double D = A - B;
    a.d_sum += D;
    a.d_sum2 += D * D;
  });

  // quadrature references
  quad::QuadratureSpec qs;
  qs.abs_tol = 1e-12;
  qs.rel_tol = 1e-10;
  auto maxpos = [&](double y, double z) {
    return analytic::joint_density_max_pos(t, y, z);
  };
  auto psi = [&](double tt, double xx) {
    return analytic::joint_density_T_B({1.0, 0.0}, tt, xx);
  };
  // c: the offset integral of the shifted law
  double c_int = quad::integrate_upper(
      [&](double u) { return maxpos(t + u, x + u); }, 0.0, qs);
  // expected gamma-box and psi-box masses
  double gamma_box = quad::tensor_gauss2d(maxpos, t, t + bins.delta_t, x,
                                          x + bins.delta_x, 16);
  double psi_box = quad::tensor_gauss2d(psi, t, t + bins.delta_t, x,
                                        x + bins.delta_x, 16);
  double a_expected = (gamma_box - psi_box) * inv_axx;
  double b_expected = 0.0;
  for (long j = 1; j <= J; ++j) {
    b_expected += quad::tensor_gauss2d(maxpos, t + j * du, t + j * du + bins.delta_t,
                                       x + j * du, x + j * du + bins.delta_x, 8) *
                  du * inv_axx;
  }

  BijectionReport r;
  r.n = acc.n;
  r.delta_t = bins.delta_t;
  r.delta_x = bins.delta_x;
  r.delta_u = du;
  double n = double(acc.n);
  double pa = double(acc.n_gamma_o) / n;
  double pb = double(acc.n_diag) / n;
  r.a_hat = pa * inv_axx;
  r.a_se = std::sqrt(std::max(0.0, pa * (1.0 - pa) / n)) * inv_axx;
  r.b_hat = pb * du * inv_axx;
  r.b_se = std::sqrt(std::max(0.0, pb * (1.0 - pb) / n)) * du * inv_axx;
  r.a_expected = a_expected;
  r.b_expected = b_expected;
  r.c_integral = c_int;
  r.binning_bias_a = std::fabs(a_expected - c_int);
  r.binning_bias_b = std::fabs(b_expected - c_int);

  double d_mean = acc.d_sum / n;
  double d_var = std::max(0.0, acc.d_sum2 / n - d_mean * d_mean);
  r.ab_paired_diff = d_mean;
  r.ab_paired_se = std::sqrt(d_var / n);
  r.ab_expected_diff = a_expected - b_expected;
  r.z_ab = r.ab_paired_se > 0.0
               ? (d_mean - r.ab_expected_diff) / r.ab_paired_se
               : 0.0;
  r.z_a = r.a_se > 0.0 ? (r.a_hat - a_expected) / r.a_se : 0.0;
  r.z_b = r.b_se > 0.0 ? (r.b_hat - b_expected) / r.b_se : 0.0;

  double pgm = double(acc.n_gamma - acc.n_gamma_o) / n;
  r.gm_rate = pgm;
  r.gm_se = std::sqrt(std::max(0.0, pgm * (1.0 - pgm) / n));
  r.gm_target = psi(t, x) * bins.delta_t * bins.delta_x;
  r.gm_allowance = std::fabs(psi_box - r.gm_target);
  r.z_gm = r.gm_se > 0.0 ? (pgm - r.gm_target) / r.gm_se : 0.0;

  r.pass_ab = std::fabs(d_mean - r.ab_expected_diff) <= 3.0 * r.ab_paired_se;
  r.pass_ac = std::fabs(r.a_hat - a_expected) <= 3.0 * r.a_se;
  r.pass_bc = std::fabs(r.b_hat - b_expected) <= 3.0 * r.b_se;
  r.pass_gm = std::fabs(pgm - r.gm_target) <= 3.0 * r.gm_se + r.gm_allowance;
  r.pass = r.pass_ab && r.pass_ac && r.pass_bc && r.pass_gm;
  return r;
}

}  // namespace maxhit::pathxform
