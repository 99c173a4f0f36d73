#pragma once

#include <optional>
#include <vector>

#include "stopcal/diffusion.hpp"
#include "stopcal/payoffs.hpp"
#include "stopcal/uconvex.hpp"

namespace stopcal {

/// Value curve of the family of stopping problems, with thresholds and tail
/// behaviour past the last attained optimum.
struct ForwardSolution {
  GridFunction v;          ///< log value on the theta grid
  GridFunction V;          ///< exp(v); +inf where the tail diverges
  SubdiffMap x_star;       ///< attaining-threshold sets per theta node
  SmOrientation orientation = SmOrientation::increasing;
  double theta_R = kInf;   ///< first theta with no attained optimum (forward)
  double theta_L = -kInf;  ///< last such theta under the reverse convention
  std::vector<double> tail_sigma;  ///< limsup estimates where not attained

  bool attained(std::size_t j) const { return x_star.sets[j].attained(); }
};

struct ForwardOptions {
  bool refine = false;        ///< golden-section sharpening of thresholds
  double tie_tol = 1e-9;
  double tail_window = 0.10;  ///< x-grid fraction used for tail estimates
  bool monotone_fast = false;
};

/// Solves the family of stopping problems for a diffusion given by its
/// eigenfunction. The payoff must pass single-crossing verification.
ForwardSolution solve_forward(const Eigenfunction& X, const PayoffFamily& p,
                              double rho, const std::vector<double>& theta_grid,
                              const ForwardOptions& opt = {});

/// Convenience overload: computes the eigenfunction from the measure first.
ForwardSolution solve_forward(const SpeedMeasure& m, const PayoffFamily& p,
                              double rho, const std::vector<double>& theta_grid,
                              const ForwardOptions& opt = {});

struct LipschitzInterval {
  double lo = 0.0;
  double hi = 0.0;
  double max_quotient = 0.0;
};

struct LipschitzReport {
  std::vector<LipschitzInterval> intervals;
  double overall = 0.0;
  bool endpoint_divergent = false;  ///< quotient blowing up at the range edge
};

/// Local Lipschitz estimates of v on the subdifferentiable range, split into
/// equal subintervals.
LipschitzReport lipschitz_report(const ForwardSolution& sol,
                                 std::size_t intervals = 8);

}  // namespace stopcal
