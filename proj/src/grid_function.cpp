#include "maxhit/grid_function.hpp"

#include <algorithm>
#include <cmath>

#include "maxhit/errors.hpp"

namespace maxhit::integral_eq {

GridFunction2D::GridFunction2D(std::vector<double> t_nodes, int n_x,
                               double x_min, double eps)
    : t_nodes_(std::move(t_nodes)), n_x_(n_x), x_min_(x_min), eps_(eps) {
  if (t_nodes_.size() < 2 || n_x_ < 2)
    throw config_error("GridFunction2D: need at least 2 nodes per axis");
  for (size_t i = 0; i < t_nodes_.size(); ++i) {
    if (!(t_nodes_[i] > 0.0))
      throw config_error("GridFunction2D: t nodes must be positive");
    if (i > 0 && !(t_nodes_[i] > t_nodes_[i - 1]))
      throw config_error("GridFunction2D: t nodes must be increasing");
    if (!(x_min_ < t_nodes_[i] - eps_))
      throw config_error("GridFunction2D: slice has empty x-range");
  }
  values_.assign(t_nodes_.size() * n_x_, 0.0);
}

double GridFunction2D::x_node(int i_t, int j) const {
  double hi = t_nodes_[i_t] - eps_;
  return x_min_ + (hi - x_min_) * j / double(n_x_ - 1);
}

void GridFunction2D::fill(const std::function<double(double, double)>& f) {
  for (size_t i = 0; i < t_nodes_.size(); ++i)
    for (int j = 0; j < n_x_; ++j)
      values_[i * n_x_ + j] = f(t_nodes_[i], x_node(int(i), j));
}

double GridFunction2D::eval(double t, double x) const {
  if (t < t_nodes_.front() || t > t_nodes_.back()) return 0.0;
  auto it = std::upper_bound(t_nodes_.begin(), t_nodes_.end(), t);
  size_t i1 = std::min<size_t>(t_nodes_.size() - 1,
                               size_t(std::max<long>(1, it - t_nodes_.begin())));
  size_t i0 = i1 - 1;
  double w = (t - t_nodes_[i0]) / (t_nodes_[i1] - t_nodes_[i0]);

  auto slice_val = [&](size_t i) {
    double hi = t_nodes_[i] - eps_;
    double xi = (x - x_min_) / (hi - x_min_);
    if (xi < 0.0 || xi > 1.0) return 0.0;
    double pos = xi * (n_x_ - 1);
    int j0 = std::min(n_x_ - 2, int(pos));
    double f = pos - j0;
    return (1.0 - f) * values_[i * n_x_ + j0] + f * values_[i * n_x_ + j0 + 1];
  };
  double v = (1.0 - w) * slice_val(i0) + w * slice_val(i1);
  return v < 0.0 ? 0.0 : v;
}

bool GridFunction2D::slice(double u, std::vector<double>& xs,
                           std::vector<double>& vs) const {
  if (u < t_nodes_.front() || u > t_nodes_.back()) return false;
  xs.resize(n_x_);
  vs.resize(n_x_);
  double hi = u - eps_;
  for (int j = 0; j < n_x_; ++j) {
    double x = x_min_ + (hi - x_min_) * j / double(n_x_ - 1);
    xs[j] = x;
    vs[j] = eval(u, x);
  }
  return true;
}

}  // namespace maxhit::integral_eq
