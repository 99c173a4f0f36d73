#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <utility>
#include <vector>

namespace stopcal {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Values above this cap are treated as +infinity when exponentiating
/// eigenfunctions; the log-space representation stays finite.
inline constexpr double kPhiCap = 1e12;

inline bool is_finite(double x) {
  return x == x && x < kInf && x > -kInf;
}

/// Shared numeric tolerances. All relative unless noted.
struct Tolerances {
  double convexity_tol = 1e-8;  ///< nodewise |f - (f^u)^u| convexity slack
  double tie_tol = 1e-9;        ///< argmax tie detection on dual values
  double dual_tol_factor = 5.0; ///< grid-spacing multiplier for dual errors
  double kink_factor = 10.0;    ///< derivative-jump/N curvature ratio for atoms
};

/// Second difference on a (possibly nonuniform) grid; exact for quadratics.
/// Throws BoundaryIndexError unless 0 < i < n-1.
double second_difference(std::span<const double> grid,
                         std::span<const double> values, std::size_t i);

/// Left and right difference quotients at node i; exact for piecewise
/// linear data. Throws BoundaryIndexError unless 0 < i < n-1.
std::pair<double, double> one_sided_slopes(std::span<const double> grid,
                                           std::span<const double> values,
                                           std::size_t i);

/// Second-order one-sided slope estimates (three-point stencils); exact for
/// quadratics. Falls back to two-point stencils near grid ends.
std::pair<double, double> one_sided_slopes_ho(std::span<const double> grid,
                                              std::span<const double> values,
                                              std::size_t i);

/// Classification of a monotone increasing tail d(x) whose maximum sits on
/// the last node: does it converge (extrapolated limit) or diverge?
struct TailEstimate {
  bool diverged = false;
  double limit = 0.0;       ///< extrapolated limsup when !diverged
  bool extrapolated = false;
};

/// Estimates limsup of d along x from the final window of samples.
/// Expects d increasing into the last node; fits an exponential decay to the
/// growth rate. Rates that do not decay mark the tail divergent.
TailEstimate tail_limsup(std::span<const double> x, std::span<const double> d);

/// One-dimensional golden-section maximization of fn over [a, b].
double golden_max(const std::function<double(double)>& fn, double a, double b,
                  double xtol, double* arg_out = nullptr);

/// Builds a uniform grid lo..hi with the given step; always includes hi.
std::vector<double> make_grid(double lo, double hi, double step);

/// Lower convex hull values of (x, y) samples, evaluated back on x.
/// x must be strictly increasing.
std::vector<double> lower_convex_hull(std::span<const double> x,
                                      std::span<const double> y);

}  // namespace stopcal
