#pragma once

#include <functional>
#include <string>
#include <vector>

namespace maxhit::stats {

/// Goodness-of-fit verdict tying samples to an analytic target.
struct GoFReport {
  double statistic = 0.0;
  double p_value = 1.0;
  long n = 0;
  std::string target;
  bool pass = false;
  double alpha = 0.01;
};

/// One-sample Kolmogorov-Smirnov test against an arbitrary CDF with the
/// asymptotic p-value.  Samples must be sorted ascending; n >= 50 required
/// for the asymptotic regime.
GoFReport ks_test(const std::vector<double>& sorted_samples,
                  const std::function<double(double)>& cdf,
                  const std::string& target = "", double alpha = 0.01);

/// Two-sample Kolmogorov-Smirnov test (both inputs sorted ascending).
GoFReport two_sample_ks(const std::vector<double>& a,
                        const std::vector<double>& b,
                        const std::string& target = "", double alpha = 0.01);

/// Pearson chi-square test of observed counts against expected masses
/// (which are normalized internally to the observed total).  Cells with
/// expected count below `min_expected` are pooled; dof = cells - 1.
GoFReport chi2_hist(const std::vector<double>& counts,
                    const std::vector<double>& expected_masses,
                    const std::string& target = "", double alpha = 0.01,
                    double min_expected = 5.0);

/// Normal-approximation confidence interval for the mean at the given
/// two-sided confidence level.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  double mean = 0.0;
  double stderr_ = 0.0;
};
Interval ci_mean(const std::vector<double>& samples, double level = 0.99);

/// Seed-replicate policy for stochastic suites: run the check at the base
/// seed; a failure is re-run on 3 fixed alternate seeds and counts as a
/// pass when at least 2 of them pass.  Keeps CI stable without hiding
/// genuine failures.
bool passes_with_replicates(const std::function<bool(std::uint64_t)>& check,
                            std::uint64_t base_seed);

}  // namespace maxhit::stats
