#include "stopcal/grid_function.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "stopcal/errors.hpp"

namespace stopcal {

GridFunction::GridFunction(std::vector<double> grid, std::vector<double> values,
                           Axis axis)
    : grid_(std::move(grid)), values_(std::move(values)), axis_(axis) {
  if (grid_.size() < 2) {
    throw Error("GridFunction: need at least two grid nodes");
  }
  if (grid_.size() != values_.size()) {
    throw Error("GridFunction: grid/value size mismatch");
  }
  for (std::size_t i = 1; i < grid_.size(); ++i) {
    if (!(grid_[i] > grid_[i - 1])) {
      throw Error("GridFunction: grid must be strictly increasing");
    }
  }
  for (double v : values_) {
    if (std::isnan(v)) {
      throw Error("GridFunction: NaN value");
    }
    if (v == -kInf) {
      throw Error("GridFunction: -inf value not representable");
    }
  }
  recompute_finite_range();
}

GridFunction GridFunction::sample(const std::function<double(double)>& fn,
                                  std::vector<double> grid, Axis axis) {
  std::vector<double> vals;
  vals.reserve(grid.size());
  for (double x : grid) {
    vals.push_back(fn(x));
  }
  return GridFunction(std::move(grid), std::move(vals), axis);
}

void GridFunction::recompute_finite_range() {
  const std::size_t n = grid_.size();
  std::size_t b = n, e = n;
  for (std::size_t i = 0; i < n; ++i) {
    if (is_finite(values_[i])) {
      b = i;
      break;
    }
  }
  if (b == n) {
    fin_begin_ = fin_end_ = 0;
    return;
  }
  e = b;
  while (e < n && is_finite(values_[e])) {
    ++e;
  }
  for (std::size_t i = e; i < n; ++i) {
    if (is_finite(values_[i])) {
      throw Error("GridFunction: finite nodes must be contiguous");
    }
  }
  fin_begin_ = b;
  fin_end_ = e;
}

double GridFunction::interpolate(double x) const {
  if (x < grid_.front() || x > grid_.back()) {
    return kInf;
  }
  auto it = std::lower_bound(grid_.begin(), grid_.end(), x);
  std::size_t hi = static_cast<std::size_t>(it - grid_.begin());
  if (hi == 0) {
    return values_[0];
  }
  if (grid_[hi] == x) {
    return values_[hi];
  }
  const std::size_t lo = hi - 1;
  if (!finite_at(lo) || !finite_at(hi)) {
    return kInf;
  }
  const double t = (x - grid_[lo]) / (grid_[hi] - grid_[lo]);
  return values_[lo] + t * (values_[hi] - values_[lo]);
}

double GridFunction::max_deviation(const GridFunction& other) const {
  double dev = 0.0;
  for (std::size_t i = 0; i < size(); ++i) {
    if (finite_at(i) && other.finite_at(i)) {
      dev = std::max(dev, std::abs(values_[i] - other.values_[i]));
    }
  }
  return dev;
}

void GridFunction::set_value(std::size_t i, double v) {
  if (std::isnan(v) || v == -kInf) {
    throw Error("GridFunction: invalid value");
  }
  values_[i] = v;
  recompute_finite_range();
}

}  // namespace stopcal
