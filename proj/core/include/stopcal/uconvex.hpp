#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <vector>

#include "stopcal/grid_function.hpp"
#include "stopcal/numeric.hpp"

namespace stopcal {

/// Closed, half-open or unbounded real interval.
struct Interval {
  double lo = 0.0;
  double hi = kInf;
  bool lo_open = false;
  bool hi_open = true;

  bool contains(double x) const {
    if (x < lo || (lo_open && x == lo)) return false;
    if (x > hi || (hi_open && x == hi)) return false;
    return true;
  }
  /// True when a grid ending at `edge` does not close the interval from
  /// above: the supremum beyond the grid is not certified.
  bool upper_open_at(double edge) const {
    if (hi == kInf) return true;
    if (edge < hi) return true;
    return hi_open;
  }
};

enum class SmOrientation { increasing, decreasing, unknown };

/// Two-variable coupling u(y, z) with partial derivatives. Evaluators must be
/// finite on the interior of y_domain x z_domain; -inf is allowed where the
/// underlying payoff vanishes and such points are excluded from suprema.
struct Coupling {
  std::function<double(double, double)> eval;
  std::function<double(double, double)> d_y;
  std::function<double(double, double)> d_z;
  std::function<double(double, double)> d_yz;
  Interval y_domain;
  Interval z_domain;
  SmOrientation sm = SmOrientation::unknown;

  Coupling transposed() const;
};

inline constexpr std::size_t kNoIndex = std::numeric_limits<std::size_t>::max();

/// Argmax record for one output node of a dual transform.
struct ArgmaxSet {
  std::vector<std::size_t> ties;  ///< all attaining indices within tie_tol
  std::size_t lo = kNoIndex;      ///< lower hull endpoint of the tie set
  std::size_t hi = kNoIndex;      ///< upper hull endpoint of the tie set
  std::size_t rep = kNoIndex;     ///< selected representative (lowest index)
  double rep_coord = 0.0;         ///< representative coordinate (refined)
  bool at_open_boundary = false;  ///< max sits on an open/truncated grid end
  bool extrapolated = false;      ///< value replaced by a tail limsup estimate

  bool empty() const { return rep == kNoIndex; }
  bool attained() const { return !empty() && !at_open_boundary; }
};

struct DualOptions {
  double tie_tol = 1e-9;
  /// One golden-section step between the argmax node and its neighbours,
  /// interpolating f linearly. Sharpens thresholds; off by default.
  bool refine = false;
  /// Replace open-boundary maxima by a stabilized tail limsup (finite
  /// extrapolation or +inf). Off by default; the forward/inverse solvers
  /// turn it on.
  bool tail_extrapolate = false;
  /// Fraction of the input grid used for the tail window.
  double tail_window = 0.10;
  /// Monotone-argmax divide and conquer instead of the row scan.
  bool monotone_fast = false;
};

struct DualResult {
  GridFunction value;            ///< f^u on the output grid
  std::vector<ArgmaxSet> argmax; ///< per output node
};

/// u-subdifferential of f: per node of f's grid, the attaining set on the
/// opposite grid.
struct SubdiffMap {
  std::vector<double> input_grid;   ///< grid of the function differentiated
  std::vector<double> value_grid;   ///< opposite-axis grid
  std::vector<ArgmaxSet> sets;      ///< one per input node

  bool empty_at(std::size_t i) const { return !sets[i].attained(); }
  double rep_coord(std::size_t i) const { return sets[i].rep_coord; }
};

struct UConvexReport {
  bool is_u_convex = false;
  double max_deviation = 0.0;
};

/// z -> max over finite-valued nodes y of [u(y,z) - f(y)], with argmax
/// bookkeeping. Throws EmptyEffectiveDomainError if f is identically +inf.
DualResult u_dual(const GridFunction& f, const Coupling& u,
                  const std::vector<double>& out_grid,
                  const DualOptions& opt = {});

/// (f^u)^u on f's own grid; never exceeds f by more than roundoff.
DualResult u_double_dual(const GridFunction& f, const Coupling& u,
                         const std::vector<double>& dual_grid,
                         const DualOptions& opt = {});

/// f is u-convex iff its double dual reproduces it within tol.
UConvexReport is_u_convex(const GridFunction& f, const Coupling& u,
                          const std::vector<double>& dual_grid, double tol,
                          const DualOptions& opt = {});

/// Full u-subdifferential of a u-convex f. Throws NotUConvexError when the
/// double-dual test fails at tol.
SubdiffMap subdifferential(const GridFunction& f, const Coupling& u,
                           const std::vector<double>& dual_grid,
                           double tol = 1e-8, const DualOptions& opt = {});

/// Representatives nondecreasing (increasing orientation) or nonincreasing
/// (decreasing orientation) across nonempty nodes.
bool check_monotone(const SubdiffMap& sd, SmOrientation orientation);

}  // namespace stopcal
