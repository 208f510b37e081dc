#pragma once

#include <cstdint>
#include <vector>

#include "maxhit/errors.hpp"
#include "maxhit/mc.hpp"

namespace maxhit::pathxform {

/// Thrown by find_cut_times when the path has no value-resolved diagonal
/// crossing (membership was decided by bridge marks only).
class not_in_gamma_o_error : public domain_error {
public:
  explicit not_in_gamma_o_error(const std::string& w) : domain_error(w) {}
};

/// Thrown when the straddling excursion is too short to carry an interior
/// straddle point at the grid resolution.
class degenerate_excursion_error : public domain_error {
public:
  explicit degenerate_excursion_error(const std::string& w) : domain_error(w) {}
};

/// A unit-slope driftless sample path on a uniform grid: values at k*dt
/// (values[0] = 0) plus per-step bridge-maximum marks (step_max[k] is the
/// within-step maximum of step k -> k+1).
struct DiscretePath {
  double dt = 0.0;
  std::vector<double> values;
  std::vector<double> step_max;
  void validate() const;
  double duration() const { return dt * double(values.size() - 1); }
  /// Supremum over [0, duration] including the bridge marks.
  double sup_marked() const;
  /// Supremum of grid values only.
  double sup_values() const;
};

/// Simulates a driftless path on [0, t]; marks come from the exact
/// bridge-maximum law when `bridge` is set, otherwise from endpoint maxima.
DiscretePath simulate_discrete_path(double t, double dt, std::uint64_t seed,
                                    std::uint64_t stream, bool bridge = true);

/// Bin widths standing in for the measure-zero conditioning events.
struct BinSpec {
  double delta_t = 0.02;
  double delta_x = 0.02;
  void validate() const;
};

enum class Membership : std::uint8_t { neither, gamma_only, gamma_o };

/// Membership of the path in the maximum/endpoint box at time t:
///   gamma:   sup in [t, t+delta_t) and endpoint in [x, x+delta_x);
///   gamma_o: additionally the running max dipped below the diagonal at a
///            grid time strictly before t.
/// gamma_only = in gamma but not gamma_o.
Membership classify(const DiscretePath& path, double t, double x,
                    const BinSpec& bins);

/// Cut data of the surgery.  All cuts are value-based and grid-aligned:
/// s is the running value-maximum at the first grid crossing (level = time
/// at the crossing), tau1/tau2 bracket the straddling excursion, tau0 is
/// the first attainment of the path's final maximum, u = 2(s - omega) with
/// omega the excursion value at the straddle index.
struct CutTimes {
  double tau1 = 0.0, tau2 = 0.0, tau0 = 0.0, s = 0.0, u = 0.0;
  long i1 = 0, i2 = 0, i0 = 0, k_idx = 0;
};

CutTimes find_cut_times(const DiscretePath& path);

/// The four-step surgery: keep [0,tau1], bring [tau2,tau0] forward, insert
/// the excursion transformed into an upward first-passage piece (time
/// reversal; the pre-straddle part reflected about the excursion level, the
/// rest shifted up by u), append the tail shifted up by u.  Duration is
/// preserved exactly; the endpoint moves up by exactly u.
DiscretePath transform_path(const DiscretePath& path, const CutTimes& cuts);

/// Three-way statistical check of the measure correspondence at (t, x):
///  (a) frequency of the gamma_o box, scaled to a density estimate;
///  (b) frequency of the diagonal family of boxes at offsets u_j = j*delta,
///      scaled likewise;
///  (c) the analytic integral of the shifted maximum/endpoint law over the
///      offset; plus the gamma-minus-gamma_o box against the joint density.
/// Expectations of (a) and (b) are computed by quadrature so the z-scores
/// are binning-bias-free; the biases themselves are reported.
struct BijectionReport {
  long n = 0;
  double delta_t = 0.0, delta_x = 0.0, delta_u = 0.0;
  double a_hat = 0.0, a_se = 0.0, a_expected = 0.0;
  double b_hat = 0.0, b_se = 0.0, b_expected = 0.0;
  double c_integral = 0.0;
  double ab_paired_diff = 0.0, ab_paired_se = 0.0, ab_expected_diff = 0.0;
  double z_ab = 0.0, z_a = 0.0, z_b = 0.0;
  double gm_rate = 0.0, gm_se = 0.0, gm_target = 0.0, gm_allowance = 0.0;
  double z_gm = 0.0;
  double binning_bias_a = 0.0, binning_bias_b = 0.0;
  bool pass_ab = false, pass_ac = false, pass_bc = false, pass_gm = false;
  bool pass = false;
};

BijectionReport bijection_check(double t, double x, const BinSpec& bins,
                                long n_paths, const mc::PathConfig& cfg);

}  // namespace maxhit::pathxform
