#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "stopcal/grid_function.hpp"
#include "stopcal/numeric.hpp"

namespace stopcal {

enum class XiKind { absorbing, natural };

struct Atom {
  double x = 0.0;
  double mass = 0.0;
};

/// Speed measure of a generalized diffusion reflected at 0: a density sampled
/// on a grid over [0, xi), point masses strictly inside (0, xi), and an
/// optional mass at the origin. A finite xi implies infinite measure beyond.
struct SpeedMeasure {
  GridFunction density;
  std::vector<Atom> atoms;
  double xi = kInf;
  XiKind xi_kind = XiKind::natural;
  double mass_at_zero = 0.0;

  void validate() const;
};

/// Eigenfunction phi(x) = 1 / E0[exp(-rho H_x)]: increasing, convex,
/// phi(0) = 1. psi = log phi is kept alongside so that large phi stays
/// representable; dphi holds right derivatives (the marching state), which
/// makes kinks at atoms exact.
struct Eigenfunction {
  GridFunction phi;
  GridFunction psi;
  std::vector<double> dphi;  ///< phi'(x_i +)
  double xi = kInf;
  XiKind xi_kind = XiKind::natural;

  /// Builds from phi samples alone; derivatives from one-sided slopes.
  static Eigenfunction from_phi_values(GridFunction phi_values);

  void validate(double tol = 1e-7) const;
};

/// Drift/diffusivity specification for diffusions out of natural scale.
struct ScaleSpec {
  std::function<double(double)> mu;
  std::function<double(double)> sigma;
  std::optional<GridFunction> s_prime;  ///< scale derivative, if tabulated
};

/// Solves (1/2) sigma^2 f'' = rho f with f(0)=1, f'(0-)=0 where the measure
/// has a strictly positive density (sigma^-2) and no atoms. Marches a
/// second-order predictor-corrector; switches to log-space propagation when
/// phi overflows.
Eigenfunction eigen_from_density(const SpeedMeasure& m, double rho);

/// String solve for any measure, atoms and gaps included: propagates (f, f')
/// across density cells and applies f'(x+) - f'(x-) = 2 rho f(x) m({x}) at
/// atoms. Kinks land exactly on atom locations.
Eigenfunction eigen_from_string(const SpeedMeasure& m, double rho);

struct SpeedRecoveryOptions {
  double kink_factor = 10.0;
  double rel_floor = 1e-9;
};

/// Inverts an eigenfunction to its speed measure: density from second
/// differences of phi, derivative jumps above the kink threshold become
/// atoms, linear stretches of phi produce zero density.
SpeedMeasure speed_from_eigen(const Eigenfunction& phi, double rho,
                              const SpeedRecoveryOptions& opt = {});

/// Marching solve of (1/2) sigma^2 f'' + mu f' = rho f on the grid (smooth
/// scale case). The result is increasing but need not be convex.
Eigenfunction eigen_with_scale(const ScaleSpec& scale,
                               const std::vector<double>& grid, double rho);

/// Recovers the level-dependent volatility from a decreasing convex
/// eigenfunction via eta^2 = 2[rho phi - (rho - delta) x phi'] / (x^2 phi'').
/// Nodes with vanishing curvature are reported as gaps (+inf).
GridFunction stock_vol_from_eigen(const GridFunction& phi, double rho,
                                  double delta);

/// Max cellwise residual of the discrete string identity
/// f'(y-) - f'(x-) = integral of 2 rho f dm; machine-size for solver output.
double string_residual(const Eigenfunction& e, const SpeedMeasure& m,
                       double rho);

}  // namespace stopcal
