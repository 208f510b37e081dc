#include "maxhit/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "maxhit/analytic.hpp"
#include "maxhit/errors.hpp"
#include "maxhit/rng.hpp"

namespace maxhit::oracle {

void WalkSpec::validate() const {
  if (!(dt > 0.0)) throw config_error("WalkSpec: dt must be positive");
  if (n_steps < 1) throw config_error("WalkSpec: n_steps must be >= 1");
  if (!(m > 0.0)) throw config_error("WalkSpec: m must be positive");
  if (!(p_up > 0.0 && p_up < 1.0))
    throw config_error("WalkSpec: p_up must lie in (0,1)");
  double work = 1.5 * double(n_steps) * double(n_steps) * double(n_steps);
  if (work > work_budget)
    throw budget_error("WalkSpec: O(n^3) DP work " + std::to_string(work) +
                       " exceeds budget; n_steps <= " +
                       std::to_string(long(std::cbrt(work_budget / 1.5))) +
                       " required");
}

WalkSpec WalkSpec::with_drift(double dt, long n_steps, double m, double mu) {
  double step = mu * std::sqrt(dt);
  if (std::fabs(step) >= 1.0)
    throw config_error("WalkSpec: |mu| sqrt(dt) must be < 1 to embed drift");
  WalkSpec s;
  s.dt = dt;
  s.n_steps = n_steps;
  s.m = m;
  s.p_up = 0.5 * (1.0 + step);
  return s;
}

double WalkSpec::drift() const { return (2.0 * p_up - 1.0) / std::sqrt(dt); }

double DiscretePMF::total() const {
  double s = 0.0;
  for (double v : masses) s += v;
  return s;
}

double DiscretePMF::cdf(double t) const {
  double s = 0.0;
  for (size_t k = 0; k < masses.size(); ++k) {
    if ((k + 1) * dt > t + 1e-15) break;
    s += masses[k];
  }
  return s;
}

DPResult dp_first_hit(const WalkSpec& spec) {
  spec.validate();
  const long n = spec.n_steps;
  const double root_dt = std::sqrt(spec.dt);
  const double p = spec.p_up, q = 1.0 - p;

  // layer[(M)*(2n+1) + (j+n)] = P(position j, running max M, alive)
  const long w = 2 * n + 1;
  std::vector<double> cur((n + 1) * w, 0.0), nxt((n + 1) * w, 0.0);
  auto at = [&](std::vector<double>& a, long M, long j) -> double& {
    return a[M * w + (j + n)];
  };
  cur[0 * w + n] = 1.0;  // (j=0, M=0)

  DPResult out;
  out.pmf.dt = spec.dt;
  out.pmf.masses.assign(n, 0.0);
  out.joint.assign(n, std::vector<double>(w, 0.0));

  double hit_total = 0.0, flushed = 0.0, cons_err = 0.0;
  for (long k = 0; k < n; ++k) {
    std::fill(nxt.begin(), nxt.end(), 0.0);
    const double t_next = (k + 1) * spec.dt;
    for (long M = 0; M <= k; ++M) {
      // hit at the next step requires m*M'*root_dt < t_next; M' >= M, so
      // slices with m*(M+1)*root_dt far above t_next still evolve normally
      for (long j = -k; j <= M; ++j) {
        double mass = at(cur, M, j);
        if (mass == 0.0) continue;
        if (mass < 1e-300) {
          flushed += mass;
          continue;
        }
        long ju = j + 1, Mu = std::max(M, ju);
        long jd = j - 1;
        at(nxt, Mu, ju) += p * mass;
        at(nxt, M, jd) += q * mass;
      }
    }
    // absorb the states that crossed
    double alive = 0.0;
    for (long M = 0; M <= k + 1; ++M) {
      bool hit_slice = spec.m * M * root_dt < t_next;
      for (long j = -(k + 1); j <= M; ++j) {
        double mass = at(nxt, M, j);
        if (mass == 0.0) continue;
        if (hit_slice) {
          out.pmf.masses[k] += mass;
          out.joint[k][j + n] += mass;
          at(nxt, M, j) = 0.0;
        } else {
          alive += mass;
        }
      }
    }
    hit_total += out.pmf.masses[k];
    cons_err = std::max(cons_err, std::fabs(hit_total + alive + flushed - 1.0));
    cur.swap(nxt);
    out.pmf.deficit = alive;
  }
  out.pmf.flushed = flushed;
  out.pmf.conservation_error = cons_err;
  return out;
}

stats::GoFReport dp_vs_mc_crosscheck(const WalkSpec& spec, long n_walks,
                                     std::uint64_t seed) {
  spec.validate();
  if (n_walks < 100) throw config_error("dp_vs_mc_crosscheck: need n_walks >= 100");
  DPResult dp = dp_first_hit(spec);

  const long n = spec.n_steps;
  const double root_dt = std::sqrt(spec.dt);
  std::vector<double> counts(n + 1, 0.0);  // last cell = not hit
  for (long i = 0; i < n_walks; ++i) {
    rng::Xoshiro256 g(seed, std::uint64_t(i));
    long j = 0, M = 0;
    long hit_step = -1;
    for (long k = 1; k <= n; ++k) {
      j += (g.uniform() < spec.p_up) ? 1 : -1;
      M = std::max(M, j);
      if (spec.m * M * root_dt < k * spec.dt) {
        hit_step = k;
        break;
      }
    }
    counts[hit_step > 0 ? hit_step - 1 : n] += 1.0;
  }
  std::vector<double> expected(dp.pmf.masses);
  expected.push_back(dp.pmf.deficit);
  return stats::chi2_hist(counts, expected, "exact lattice hitting law");
}

double dp_cdf_sup_distance(const WalkSpec& spec) {
  DPResult dp = dp_first_hit(spec);
  analytic::ModelParams p{spec.m, spec.drift()};
  double sup = 0.0, cum = 0.0;
  for (long k = 0; k < spec.n_steps; ++k) {
    double t = (k + 1) * spec.dt;
    cum += dp.pmf.masses[k];
    sup = std::max(sup, std::fabs(cum - analytic::cdf_T(p, t)));
  }
  return sup;
}

}  // namespace maxhit::oracle
