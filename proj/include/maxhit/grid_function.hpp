#pragma once

#include <functional>
#include <vector>

namespace maxhit::integral_eq {

/// Function tabulated on the wedge domain D = {t > 0, x < t}.
///
/// Each t-slice carries the same number of x-nodes, linearly spaced on
/// [x_min, t - eps]; queries are interpolated bilinearly in (t, xi) where
/// xi is the per-slice normalized x coordinate.  Outside the tabulated
/// range the function is treated as zero (domain truncation), and negative
/// interpolated values are clamped to zero.
class GridFunction2D {
public:
  GridFunction2D(std::vector<double> t_nodes, int n_x, double x_min,
                 double eps = 1e-3);

  /// Tabulates f(t, x) at every node.
  void fill(const std::function<double(double, double)>& f);

  double x_min() const { return x_min_; }
  double eps() const { return eps_; }
  int n_x() const { return n_x_; }
  const std::vector<double>& t_nodes() const { return t_nodes_; }

  double x_node(int i_t, int j) const;
  double value_at(int i_t, int j) const { return values_[i_t * n_x_ + j]; }
  void set_value(int i_t, int j, double v) { values_[i_t * n_x_ + j] = v; }

  /// Bilinear interpolation, clamped to [0, inf); zero outside the grid.
  double eval(double t, double x) const;

  /// Per-slice piecewise-linear restriction h(u, .), used by the operator
  /// kernel: returns x-nodes and values of slice-interpolated data at
  /// arbitrary u inside the t-range.  Returns false when u is outside.
  bool slice(double u, std::vector<double>& xs, std::vector<double>& vs) const;

private:
  std::vector<double> t_nodes_;
  int n_x_;
  double x_min_;
  double eps_;
  std::vector<double> values_;
};

}  // namespace maxhit::integral_eq
