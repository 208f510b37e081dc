#pragma once

#include <cstdint>
#include <vector>

#include "maxhit/stats.hpp"

namespace maxhit::oracle {

/// Lattice walk specification: steps of +-sqrt(dt) every dt time units,
/// up-probability p_up (1/2 = driftless; p_up = (1 + mu sqrt(dt))/2 embeds
/// drift mu), barrier slope m.
struct WalkSpec {
  double dt = 1e-3;
  long n_steps = 100;
  double m = 1.0;
  double p_up = 0.5;

  /// Total DP work is O(n_steps^3); runs beyond the budget are refused.
  double work_budget = 2e10;

  void validate() const;
  static WalkSpec with_drift(double dt, long n_steps, double m, double mu);
  double drift() const;  // (2 p_up - 1)/sqrt(dt)
};

/// Exact hitting-law of the lattice walk.  masses[k] is P(That = (k+1) dt)
/// for k = 0..n_steps-1; deficit is the not-yet-hit mass after n_steps.
struct DiscretePMF {
  double dt = 0.0;
  std::vector<double> masses;
  double deficit = 0.0;
  double flushed = 0.0;            // total probability flushed to zero (underflow guard)
  double conservation_error = 0.0; // max per-step |hit + alive - 1|

  double total() const;
  /// CDF at time t (right-continuous step function).
  double cdf(double t) const;
};

/// Joint exact law of (hit step, endpoint): masses[k][j + n_steps] is the
/// probability of hitting at step k+1 at lattice position j sqrt(dt).
struct DPResult {
  DiscretePMF pmf;
  std::vector<std::vector<double>> joint;
};

/// Forward dynamic programming over (position, running maximum) with
/// absorption at the first step where m * max * sqrt(dt) < k * dt
/// (strict inequality; ties are not hits).
DPResult dp_first_hit(const WalkSpec& spec);

/// Simulates the identical lattice walk by Monte Carlo and chi-square
/// tests the hit-step frequencies against the exact DP law.  Disagreement
/// indicates an implementation bug, never model error.
stats::GoFReport dp_vs_mc_crosscheck(const WalkSpec& spec, long n_walks,
                                     std::uint64_t seed);

/// sup over the DP support of |CDF_DP - CDF| against the continuum law
/// with the matching slope and drift.
double dp_cdf_sup_distance(const WalkSpec& spec);

}  // namespace maxhit::oracle
