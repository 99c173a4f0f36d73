#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "stopcal/numeric.hpp"

namespace stopcal {

/// Which axis a sampled function lives on.
enum class Axis { x, theta };

/// Extended-real-valued function sampled on a strictly increasing grid.
///
/// Values may be +infinity, meaning "outside the effective domain"; -infinity
/// and NaN are rejected at construction. The finite-valued nodes always form
/// a contiguous index range.
class GridFunction {
 public:
  /// Empty placeholder; any populated instance has at least two nodes.
  GridFunction() = default;

  GridFunction(std::vector<double> grid, std::vector<double> values,
               Axis axis = Axis::x);

  bool empty() const { return grid_.empty(); }

  static GridFunction sample(const std::function<double(double)>& fn,
                             std::vector<double> grid, Axis axis = Axis::x);

  const std::vector<double>& grid() const { return grid_; }
  const std::vector<double>& values() const { return values_; }
  Axis axis() const { return axis_; }
  std::size_t size() const { return grid_.size(); }

  double coord(std::size_t i) const { return grid_[i]; }
  double value(std::size_t i) const { return values_[i]; }
  bool finite_at(std::size_t i) const { return is_finite(values_[i]); }

  /// First and one-past-last finite node indices.
  std::size_t finite_begin() const { return fin_begin_; }
  std::size_t finite_end() const { return fin_end_; }
  std::size_t finite_count() const { return fin_end_ - fin_begin_; }

  /// Linear interpolation; +infinity outside the grid or on infinite nodes.
  double interpolate(double x) const;

  /// Nodewise maximum deviation from another function on the same grid,
  /// computed over nodes where both are finite.
  double max_deviation(const GridFunction& other) const;

  void set_value(std::size_t i, double v);

 private:
  void recompute_finite_range();

  std::vector<double> grid_;
  std::vector<double> values_;
  Axis axis_;
  std::size_t fin_begin_ = 0;
  std::size_t fin_end_ = 0;
};

}  // namespace stopcal
