#include "maxhit/mc.hpp"

#include <algorithm>
#include <cmath>

#include "maxhit/errors.hpp"
#include "maxhit/quadrature.hpp"

namespace maxhit::mc {

using analytic::ModelParams;

void PathConfig::validate() const {
  if (!(dt > 0.0) || !(horizon > 0.0) || dt > horizon)
    throw config_error("PathConfig: need 0 < dt <= horizon < inf");
  if (!std::isfinite(horizon)) throw config_error("PathConfig: horizon must be finite");
  if (n_paths < 1) throw config_error("PathConfig: n_paths must be >= 1");
  if (refine_levels < 0 || refine_levels > 40)
    throw config_error("PathConfig: refine_levels out of range");
}

namespace {

inline double bridge_max_draw(double b0, double b1, double h, double u) {
  double d = b1 - b0;
  return 0.5 * (b0 + b1 + std::sqrt(d * d - 2.0 * h * std::log(u)));
}

inline double bridge_min_draw(double b0, double b1, double h, double u) {
  double d = b1 - b0;
  return 0.5 * (b0 + b1 - std::sqrt(d * d - 2.0 * h * std::log(u)));
}

class PathSimulator {
public:
  PathSimulator(const ModelParams& p, const PathConfig& cfg)
      : m_(p.m), mu_(p.mu), bridge_(cfg.bridge_max_correction),
        levels_(cfg.refine_levels) {}

  FirstHitSample run(double horizon, double dt, rng::Xoshiro256& g,
                     ArgmaxLeaf* amx = nullptr) {
    s_ = 0.0;
    hit_ = false;
    amx_ = amx;
    if (amx_) amx_->valid = false;
    double t = 0.0, b = 0.0;
    while (t < horizon - 1e-12) {
      double h = std::min(dt, horizon - t);
      double b1 = b + mu_ * h + std::sqrt(h) * g.normal();
      if (segment(t, b, b1, h, 0, g)) {
        return {T_, B_T_, S_T_, true, false, false, false, 0.0};
      }
      t += h;
      b = b1;
    }
    return {horizon, b, s_, false, false, false, false, 0.0};
  }

  double final_max() const { return s_; }

private:
  bool segment(double t0, double b0, double b1, double h, int depth,
               rng::Xoshiro256& g) {
    // refine only while a crossing inside the step is possible at all:
    // the max is nondecreasing, so m*s - r >= m*s - (t0+h) on the step
    if (bridge_ && m_ * s_ < t0 + h && depth < levels_) {
      double bm = 0.5 * (b0 + b1) + 0.5 * std::sqrt(h) * g.normal();
      if (segment(t0, b0, bm, 0.5 * h, depth + 1, g)) return true;
      return segment(t0 + 0.5 * h, bm, b1, 0.5 * h, depth + 1, g);
    }
    double M = bridge_ ? bridge_max_draw(b0, b1, h, g.uniform_pos())
                       : std::max(b0, b1);
    double s1 = std::max(s_, M);
    double phi1 = m_ * s1 - (t0 + h);
    if (phi1 < 0.0) {
      double phi0 = m_ * s_ - t0;
      double frac = phi0 > 0.0 ? phi0 / (phi0 - phi1) : 0.5;
      T_ = t0 + frac * h;
      S_T_ = s_ + (s1 - s_) * frac;
      B_T_ = b0 + (b1 - b0) * frac;
      if (amx_ && s1 > s_) *amx_ = {t0, h, b0, b1, M, true};
      hit_ = true;
      return true;
    }
    if (amx_ && s1 > s_) *amx_ = {t0, h, b0, b1, M, true};
    s_ = s1;
    return false;
  }

  double m_, mu_;
  bool bridge_;
  int levels_;
  double s_ = 0.0;
  bool hit_ = false;
  double T_ = 0.0, S_T_ = 0.0, B_T_ = 0.0;
  ArgmaxLeaf* amx_ = nullptr;
};

}  // namespace

FirstHitSample simulate_one_path(const ModelParams& p, const PathConfig& cfg,
                                 rng::Xoshiro256& g, ArgmaxLeaf* amx) {
  PathSimulator sim(p, cfg);
  return sim.run(cfg.horizon, cfg.dt, g, amx);
}

double sample_bridge_argmax_time(double h, double b0, double b1, double M,
                                 rng::Xoshiro256& g) {
  double p = M - b0, q = M - b1;
  if (!(h > 0.0)) throw domain_error("sample_bridge_argmax_time: h must be positive");
  if (p < 0.0 || q < 0.0)
    throw domain_error("sample_bridge_argmax_time: M below an endpoint");
  double A = p * p / (2.0 * h), B = q * q / (2.0 * h);
  if (A < 1e-12 * (1.0 + B)) return 0.0;
  if (B < 1e-12 * (1.0 + A)) return h;
  // argmax-fraction density ~ w^{-3/2}(1-w)^{-3/2} exp(-A/w - B/(1-w));
  // inverse-CDF in the logit coordinate
  double cut = (std::sqrt(A) + std::sqrt(B)) * (std::sqrt(A) + std::sqrt(B)) + 745.0;
  double w_lo = std::max(1e-15, A / cut);
  double w_hi = std::min(1.0 - 1e-15, 1.0 - B / cut);
  double z_lo = std::log(w_lo / (1.0 - w_lo));
  double z_hi = std::log(w_hi / (1.0 - w_hi));
  constexpr int N = 1025;
  static thread_local std::vector<double> lg(N), cdf(N);
  double dz = (z_hi - z_lo) / (N - 1);
  double lg_max = -1e308;
  for (int i = 0; i < N; ++i) {
    double z = z_lo + i * dz;
    double w = 1.0 / (1.0 + std::exp(-z));
    lg[i] = -0.5 * std::log(w) - 0.5 * std::log1p(-w) - A / w - B / (1.0 - w);
    lg_max = std::max(lg_max, lg[i]);
  }
  cdf[0] = 0.0;
  for (int i = 1; i < N; ++i) {
    double f0 = std::exp(lg[i - 1] - lg_max);
    double f1v = std::exp(lg[i] - lg_max);
    cdf[i] = cdf[i - 1] + 0.5 * (f0 + f1v) * dz;
  }
  double total = cdf[N - 1];
  if (!(total > 0.0)) return 0.5 * h;
  double u = g.uniform_pos() * total;
  auto it = std::lower_bound(cdf.begin(), cdf.end(), u);
  int i = int(std::max<long>(1, it - cdf.begin()));
  double seg = cdf[i] - cdf[i - 1];
  double f = seg > 0.0 ? (u - cdf[i - 1]) / seg : 0.5;
  double z = z_lo + (i - 1 + f) * dz;
  double w = 1.0 / (1.0 + std::exp(-z));
  return h * w;
}

// --- accumulators -------------------------------------------------------------

namespace {

struct MomentsAcc {
  long n = 0, hits = 0;
  double sT = 0, sT2 = 0, sT3 = 0, sT4 = 0;
  double sg = 0, sg2 = 0, sB = 0, sB2 = 0;
  void merge(const MomentsAcc& o) {
    n += o.n;
    hits += o.hits;
    sT += o.sT;
    sT2 += o.sT2;
    sT3 += o.sT3;
    sT4 += o.sT4;
    sg += o.sg;
    sg2 += o.sg2;
    sB += o.sB;
    sB2 += o.sB2;
  }
};

double se_of(double sum, double sumsq, long n) {
  if (n < 2) return 0.0;
  double mean = sum / n;
  double var = std::max(0.0, sumsq / n - mean * mean);
  return std::sqrt(var / n);
}

}  // namespace

FirstHitMoments first_hit_moments(const ModelParams& p, const PathConfig& cfg) {
  p.validate();
  cfg.validate();
  auto acc = run_paths<MomentsAcc>(cfg, [&](long, rng::Xoshiro256& g, MomentsAcc& a) {
    PathSimulator sim(p, cfg);
    FirstHitSample s = sim.run(cfg.horizon, cfg.dt, g);
    a.n++;
    if (s.hit) {
      a.hits++;
      double T = s.T, gap = s.S_T - s.B_T;
      a.sT += T;
      a.sT2 += T * T;
      a.sT3 += T * T * T;
      a.sT4 += T * T * T * T;
      a.sg += gap;
      a.sg2 += gap * gap;
      a.sB += s.B_T;
      a.sB2 += s.B_T * s.B_T;
    }
  });
  FirstHitMoments m;
  m.n = acc.n;
  m.hits = acc.hits;
  m.seed = cfg.seed;
  m.censored_fraction = acc.n ? double(acc.n - acc.hits) / acc.n : 0.0;
  if (acc.hits > 0) {
    m.mean_T = acc.sT / acc.hits;
    m.se_T = se_of(acc.sT, acc.sT2, acc.hits);
    m.mean_T2 = acc.sT2 / acc.hits;
    m.se_T2 = se_of(acc.sT2, acc.sT4, acc.hits);
    m.mean_gap = acc.sg / acc.hits;
    m.se_gap = se_of(acc.sg, acc.sg2, acc.hits);
    m.mean_B = acc.sB / acc.hits;
    m.se_B = se_of(acc.sB, acc.sB2, acc.hits);
  }
  m.hit_fraction = double(acc.hits) / acc.n;
  m.se_hit = std::sqrt(std::max(0.0, m.hit_fraction * (1.0 - m.hit_fraction) / acc.n));
  return m;
}

namespace {
struct SampleAcc {
  std::vector<FirstHitSample> v;
  void merge(const SampleAcc& o) { v.insert(v.end(), o.v.begin(), o.v.end()); }
};
}  // namespace

std::vector<FirstHitSample> sample_first_hits(const ModelParams& p,
                                              const PathConfig& cfg) {
  p.validate();
  cfg.validate();
  auto acc = run_paths<SampleAcc>(cfg, [&](long, rng::Xoshiro256& g, SampleAcc& a) {
    PathSimulator sim(p, cfg);
    a.v.push_back(sim.run(cfg.horizon, cfg.dt, g));
  });
  return std::move(acc.v);
}

MCEstimate estimate_survival(const ModelParams& p, double t, const PathConfig& cfg) {
  p.validate();
  cfg.validate();
  if (t > cfg.horizon) throw config_error("estimate_survival: t exceeds horizon");
  PathConfig c = cfg;
  c.horizon = t;
  struct Acc {
    long n = 0, alive = 0;
    void merge(const Acc& o) {
      n += o.n;
      alive += o.alive;
    }
  };
  auto acc = run_paths<Acc>(c, [&](long, rng::Xoshiro256& g, Acc& a) {
    PathSimulator sim(p, c);
    FirstHitSample s = sim.run(c.horizon, c.dt, g);
    a.n++;
    if (!s.hit) a.alive++;
  });
  MCEstimate e;
  e.n = acc.n;
  e.seed = cfg.seed;
  e.mean = double(acc.alive) / acc.n;
  e.stderr_ = std::sqrt(std::max(0.0, e.mean * (1.0 - e.mean) / acc.n));
  return e;
}

RhoSplitEstimate estimate_t_before_rho(const ModelParams& p, const PathConfig& cfg) {
  p.validate();
  cfg.validate();
  if (!(p.mu < 0.0))
    throw regime_error("estimate_t_before_rho: requires mu < 0");
  const double span = cfg.rho_span > 0.0 ? cfg.rho_span : 10.0 / std::fabs(p.mu);
  const double hc = cfg.rho_dt > 0.0 ? cfg.rho_dt : std::max(cfg.dt, 1e-2);
  struct Acc {
    long n = 0, classified = 0, before = 0, censored_T = 0;
    double bias_sum = 0.0, sw = 0.0, sw2 = 0.0;
    void merge(const Acc& o) {
      n += o.n;
      classified += o.classified;
      before += o.before;
      censored_T += o.censored_T;
      bias_sum += o.bias_sum;
      sw += o.sw;
      sw2 += o.sw2;
    }
  };
  auto acc = run_paths<Acc>(cfg, [&](long, rng::Xoshiro256& g, Acc& a) {
    PathSimulator sim(p, cfg);
    FirstHitSample s = sim.run(cfg.horizon, cfg.dt, g);
    a.n++;
    if (!s.hit) {
      a.censored_T++;
      return;
    }
    double gap = std::max(0.0, s.S_T - s.B_T);
    double w = std::exp(-2.0 * std::fabs(p.mu) * gap);
    a.sw += w;
    a.sw2 += w * w;
    // continue the path until it exceeds the hit-time maximum or the span runs out
    double level = s.S_T;
    double b = s.B_T;
    double t = 0.0;
    bool exceeded = false;
    while (t < span) {
      double b1 = b + p.mu * hc + std::sqrt(hc) * g.normal();
      double M = bridge_max_draw(b, b1, hc, g.uniform_pos());
      if (M > level) {
        exceeded = true;
        break;
      }
      b = b1;
      t += hc;
    }
    a.classified++;
    if (exceeded) {
      a.before++;
    } else {
      a.bias_sum += std::exp(-2.0 * std::fabs(p.mu) * (level - b));
    }
  });
  RhoSplitEstimate r;
  r.prob_t_before_rho.n = acc.classified;
  r.prob_t_before_rho.seed = cfg.seed;
  r.prob_t_before_rho.mean =
      acc.classified ? double(acc.before) / acc.classified : 0.0;
  r.prob_t_before_rho.stderr_ = std::sqrt(std::max(
      0.0, r.prob_t_before_rho.mean * (1.0 - r.prob_t_before_rho.mean) /
               std::max(1L, acc.classified)));
  r.prob_t_before_rho.censored_fraction =
      acc.n ? double(acc.censored_T) / acc.n : 0.0;
  r.truncation_bias_bound =
      acc.classified ? acc.bias_sum / acc.classified : 0.0;
  if (acc.classified > 0) {
    r.analytic_route_mean = acc.sw / acc.classified;
    r.analytic_route_se = se_of(acc.sw, acc.sw2, acc.classified);
  }
  return r;
}

std::vector<double> sample_x_h0_minus(const PathConfig& cfg) {
  cfg.validate();
  const ModelParams p{1.0, 0.0};
  struct Acc {
    std::vector<double> v;
    void merge(const Acc& o) { v.insert(v.end(), o.v.begin(), o.v.end()); }
  };
  auto acc = run_paths<Acc>(cfg, [&](long, rng::Xoshiro256& g, Acc& a) {
    PathSimulator sim(p, cfg);
    ArgmaxLeaf leaf;
    FirstHitSample s = sim.run(cfg.horizon, cfg.dt, g, &leaf);
    if (!s.hit || !leaf.valid) return;
    double theta = sample_bridge_argmax_time(leaf.h, leaf.b0, leaf.b1, leaf.M, g);
    double H = leaf.t0 + theta;
    a.v.push_back(std::max(0.0, s.T - H));
  });
  return std::move(acc.v);
}

ExponentCheck check_laplace_exponent(double t, double lambda, long n,
                                     std::uint64_t seed) {
  if (!(t > 0.0)) throw domain_error("check_laplace_exponent: t must be positive");
  if (lambda < 0.0)
    throw domain_error("check_laplace_exponent: lambda must be >= 0");
  if (n < 1) throw config_error("check_laplace_exponent: n must be >= 1");
  PathConfig cfg;
  cfg.n_paths = n;
  cfg.seed = seed;
  struct Acc {
    double s = 0, s2 = 0;
    long n = 0;
    void merge(const Acc& o) {
      s += o.s;
      s2 += o.s2;
      n += o.n;
    }
  };
  auto acc = run_paths<Acc>(cfg, [&](long, rng::Xoshiro256& g, Acc& a) {
    double z = g.normal();
    double tau = t * t / (z * z);  // exact ladder-time sample
    double w = std::exp(lambda * (t - tau));
    a.s += w;
    a.s2 += w * w;
    a.n++;
  });
  ExponentCheck out;
  out.est.mean = acc.s / acc.n;
  out.est.stderr_ = se_of(acc.s, acc.s2, acc.n);
  out.est.n = acc.n;
  out.est.seed = seed;
  out.heavy_tail_warning = t * 2.0 * std::sqrt(lambda) * (std::sqrt(2.0) - 1.0) > 20.0;
  return out;
}

RangeSurvival estimate_range_survival(double t, const PathConfig& cfg) {
  cfg.validate();
  if (!(t > 0.0) || t > cfg.horizon)
    throw config_error("estimate_range_survival: need 0 < t <= horizon");
  struct Acc {
    long n = 0, range_alive = 0, one_alive = 0, violations = 0;
    void merge(const Acc& o) {
      n += o.n;
      range_alive += o.range_alive;
      one_alive += o.one_alive;
      violations += o.violations;
    }
  };
  const long K = long(std::ceil(t / cfg.dt - 1e-12));
  auto acc = run_paths<Acc>(cfg, [&](long, rng::Xoshiro256& g, Acc& a) {
    double b = 0.0, hi = 0.0, lo = 0.0;
    bool alive_range = true, alive_one = true;
    double tk = 0.0;
    for (long k = 0; k < K && (alive_range || alive_one); ++k) {
      double h = std::min(cfg.dt, t - tk);
      double b1 = b + std::sqrt(h) * g.normal();
      double M, I;
      if (cfg.bridge_max_correction) {
        M = bridge_max_draw(b, b1, h, g.uniform_pos());
        I = bridge_min_draw(b, b1, h, g.uniform_pos());
      } else {
        M = std::max(b, b1);
        I = std::min(b, b1);
      }
      hi = std::max(hi, M);
      lo = std::min(lo, I);
      tk += h;
      b = b1;
      if (alive_one && hi < tk) alive_one = false;
      if (alive_range && hi - lo < tk) alive_range = false;
    }
    a.n++;
    if (alive_range) a.range_alive++;
    if (alive_one) a.one_alive++;
    if (alive_one && !alive_range) a.violations++;  // impossible pathwise
  });
  auto binom = [&](long k) {
    MCEstimate e;
    e.n = acc.n;
    e.seed = cfg.seed;
    e.mean = double(k) / acc.n;
    e.stderr_ = std::sqrt(std::max(0.0, e.mean * (1.0 - e.mean) / acc.n));
    return e;
  };
  RangeSurvival out;
  out.range = binom(acc.range_alive);
  out.one_sided = binom(acc.one_alive);
  out.dominance_violations = acc.violations;
  return out;
}

Hist2D histogram_joint(const ModelParams& p, const PathConfig& cfg,
                       const std::vector<double>& t_edges,
                       const std::vector<double>& x_edges) {
  p.validate();
  cfg.validate();
  if (t_edges.size() < 2 || x_edges.size() < 2)
    throw config_error("histogram_joint: need at least one bin per axis");
  const long nt = long(t_edges.size()) - 1, nx = long(x_edges.size()) - 1;
  struct Acc {
    std::vector<double> counts;
    double pool = 0.0;
    long n = 0;
    void merge(const Acc& o) {
      if (counts.empty()) counts.assign(o.counts.size(), 0.0);
      for (size_t i = 0; i < o.counts.size(); ++i) counts[i] += o.counts[i];
      pool += o.pool;
      n += o.n;
    }
  };
  auto acc = run_paths<Acc>(cfg, [&](long, rng::Xoshiro256& g, Acc& a) {
    if (a.counts.empty()) a.counts.assign(nt * nx, 0.0);
    PathSimulator sim(p, cfg);
    FirstHitSample s = sim.run(cfg.horizon, cfg.dt, g);
    a.n++;
    if (!s.hit) {
      a.pool += 1.0;
      return;
    }
    auto bin_of = [](const std::vector<double>& e, double v) -> long {
      if (v < e.front() || v >= e.back()) return -1;
      return long(std::upper_bound(e.begin(), e.end(), v) - e.begin()) - 1;
    };
    long it = bin_of(t_edges, s.T), ix = bin_of(x_edges, s.B_T);
    if (it < 0 || ix < 0) {
      a.pool += 1.0;
    } else {
      a.counts[it * nx + ix] += 1.0;
    }
  });
  Hist2D h;
  h.t_edges = t_edges;
  h.x_edges = x_edges;
  h.counts = acc.counts.empty() ? std::vector<double>(nt * nx, 0.0) : acc.counts;
  h.pool_count = acc.pool;
  h.n = acc.n;
  return h;
}

std::vector<double> expected_joint_masses(const ModelParams& p,
                                          const std::vector<double>& t_edges,
                                          const std::vector<double>& x_edges) {
  p.validate();
  const long nt = long(t_edges.size()) - 1, nx = long(x_edges.size()) - 1;
  std::vector<double> masses(nt * nx, 0.0);
  for (long i = 0; i < nt; ++i) {
    for (long j = 0; j < nx; ++j) {
      masses[i * nx + j] = quad::tensor_gauss2d(
          [&](double t, double x) { return analytic::joint_density_T_B(p, t, x); },
          t_edges[i], t_edges[i + 1], x_edges[j], x_edges[j + 1], 12);
    }
  }
  return masses;
}

}  // namespace maxhit::mc
