#pragma once

#include <atomic>
#include <cstdint>
#include <thread>
#include <vector>

#include "maxhit/analytic.hpp"
#include "maxhit/rng.hpp"

namespace maxhit::mc {

/// Simulation grid and reproducibility configuration.
///
/// Steps of size dt carry exact Gaussian increments; with
/// bridge_max_correction the within-step maximum is drawn from the exact
/// bridge-maximum law, and steps on which the barrier could be crossed are
/// recursively bisected (down to dt / 2^refine_levels) before the crossing
/// is resolved, which removes most of the discrete-monitoring bias in both
/// the hit indicator and the hit-time placement.
struct PathConfig {
  double dt = 1e-3;
  double horizon = 50.0;
  std::uint64_t seed = 0;
  bool bridge_max_correction = true;
  long n_paths = 1;
  int refine_levels = 12;
  int threads = 0;  // 0 = hardware concurrency
  // continuation parameters for the pre-maximum classification
  double rho_span = 0.0;  // 0 = auto (10/|mu|)
  double rho_dt = 0.0;    // 0 = auto (max(dt, 1e-2))

  void validate() const;
};

/// One simulated realization of the first hit.
struct FirstHitSample {
  double T = 0.0;    // hit time, or horizon when censored
  double B_T = 0.0;  // position at T (at horizon when censored)
  double S_T = 0.0;  // running maximum at T
  bool hit = false;
  bool has_t_lt_rho = false;
  bool t_lt_rho = false;
  bool has_x_h0 = false;
  double x_h0 = 0.0;
};

struct MCEstimate {
  double mean = 0.0;
  double stderr_ = 0.0;
  long n = 0;
  std::uint64_t seed = 0;
  double censored_fraction = 0.0;
};

/// Record of the grid leaf on which the path's final maximum was set, used
/// to sample the exact within-leaf argmax time afterwards.
struct ArgmaxLeaf {
  double t0 = 0.0, h = 0.0, b0 = 0.0, b1 = 0.0, M = 0.0;
  bool valid = false;
};

/// Simulates one path to its first hit (or the horizon).  When `amx` is
/// non-null, the leaf on which the final maximum was attained is recorded.
FirstHitSample simulate_one_path(const analytic::ModelParams& p,
                                 const PathConfig& cfg, rng::Xoshiro256& g,
                                 ArgmaxLeaf* amx = nullptr);

/// Samples the argmax time of a Brownian bridge over a step of length h
/// with endpoints b0, b1 and maximum M, by numeric inversion of the exact
/// two-sided first-passage decomposition.
double sample_bridge_argmax_time(double h, double b0, double b1, double M,
                                 rng::Xoshiro256& g);

/// Deterministic parallel fold over paths: path i always uses the RNG
/// substream derived from (seed, i), chunk results are merged in index
/// order, so the result is bit-identical for every thread count.
template <class Acc, class Body>
Acc run_paths(const PathConfig& cfg, Body&& body) {
  const long chunk = 8192;
  const long n_chunks = (cfg.n_paths + chunk - 1) / chunk;
  std::vector<Acc> accs(n_chunks);
  std::atomic<long> next{0};
  unsigned hw = std::thread::hardware_concurrency();
  long nt = cfg.threads > 0 ? cfg.threads : (hw ? hw : 1);
  nt = std::max(1L, std::min(nt, n_chunks));
  auto work = [&] {
    for (;;) {
      long c = next.fetch_add(1);
      if (c >= n_chunks) return;
      long lo = c * chunk, hi = std::min(cfg.n_paths, lo + chunk);
      for (long i = lo; i < hi; ++i) {
        rng::Xoshiro256 g(cfg.seed, std::uint64_t(i));
        body(i, g, accs[c]);
      }
    }
  };
  if (nt == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (long k = 0; k < nt; ++k) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  Acc total{};
  for (auto& a : accs) total.merge(a);
  return total;
}

// --- estimators ---------------------------------------------------------------

/// Sufficient statistics of the first-hit law.  Moment estimates condition
/// on {hit}; the censored fraction is reported alongside.
struct FirstHitMoments {
  long n = 0;
  long hits = 0;
  double censored_fraction = 0.0;
  double mean_T = 0.0, se_T = 0.0;
  double mean_T2 = 0.0, se_T2 = 0.0;
  double mean_gap = 0.0, se_gap = 0.0;
  double mean_B = 0.0, se_B = 0.0;
  double hit_fraction = 0.0, se_hit = 0.0;
  std::uint64_t seed = 0;
};
FirstHitMoments first_hit_moments(const analytic::ModelParams& p,
                                  const PathConfig& cfg);

/// Materializes full samples (memory: ~56 bytes each).
std::vector<FirstHitSample> sample_first_hits(const analytic::ModelParams& p,
                                              const PathConfig& cfg);

/// P(T > t) by the fraction of paths without a hit before t.
MCEstimate estimate_survival(const analytic::ModelParams& p, double t,
                             const PathConfig& cfg);

/// Pre-maximum classification estimate for mu < 0.  Paths are continued
/// after the hit until they exceed the hit-time maximum (T < rho) or the
/// continuation span is exhausted; the per-path exceedance bound
/// e^{-2|mu|(S_T - B_end)} is accumulated into a reported truncation-bias
/// bound.  `analytic_route_*` is the strong-Markov cross-check estimator
/// E[e^{-2|mu| (S_T - B_T)}] computed from the same paths.
struct RhoSplitEstimate {
  MCEstimate prob_t_before_rho;
  double truncation_bias_bound = 0.0;
  double analytic_route_mean = 0.0;
  double analytic_route_se = 0.0;
};
RhoSplitEstimate estimate_t_before_rho(const analytic::ModelParams& p,
                                       const PathConfig& cfg);

/// Per hit path (m = 1, mu = 0): T minus the first time the path attained
/// its final maximum level.
std::vector<double> sample_x_h0_minus(const PathConfig& cfg);

/// Exact-sampler check of the ladder-time transform: averages
/// e^{lambda (t - tau)} with tau = t^2/Z^2, Z standard normal.
struct ExponentCheck {
  MCEstimate est;
  bool heavy_tail_warning = false;
};
ExponentCheck check_laplace_exponent(double t, double lambda, long n,
                                     std::uint64_t seed);

/// Double-sided (range) survival explorer: P(range_s >= s for all s <= t),
/// with bridge-corrected per-step maxima AND minima.  No analytic target
/// exists; the one-sided estimate from the same paths and the pathwise
/// dominance count are reported.
struct RangeSurvival {
  MCEstimate range;
  MCEstimate one_sided;
  long dominance_violations = 0;
};
RangeSurvival estimate_range_survival(double t, const PathConfig& cfg);

/// 2-D histogram of hit samples (T, B_T) on the given bin edges; counts is
/// row-major [t_bin][x_bin], pool_count collects everything else
/// (out-of-window hits and censored paths).
struct Hist2D {
  std::vector<double> t_edges;
  std::vector<double> x_edges;
  std::vector<double> counts;
  double pool_count = 0.0;
  long n = 0;
};
Hist2D histogram_joint(const analytic::ModelParams& p, const PathConfig& cfg,
                       const std::vector<double>& t_edges,
                       const std::vector<double>& x_edges);

/// Expected per-bin masses of the joint law by fixed tensor quadrature.
std::vector<double> expected_joint_masses(const analytic::ModelParams& p,
                                          const std::vector<double>& t_edges,
                                          const std::vector<double>& x_edges);

}  // namespace maxhit::mc
