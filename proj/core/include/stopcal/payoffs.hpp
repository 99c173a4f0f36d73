#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "stopcal/uconvex.hpp"

namespace stopcal {

enum class MonotoneInX { nondecreasing, nonincreasing };

/// One-parameter payoff family G(x, theta) >= 0 with g = log G and analytic
/// partials. Where G vanishes, g evaluates to -inf and the point is excluded
/// from suprema.
struct PayoffFamily {
  std::string name;
  std::function<double(double, double)> G;
  std::function<double(double, double)> g;
  std::function<double(double, double)> g_x;
  std::function<double(double, double)> g_theta;
  std::function<double(double, double)> g_xtheta;
  Interval x_domain;
  Interval theta_domain;
  MonotoneInX monotone_in_x = MonotoneInX::nondecreasing;
  SmOrientation sm_orientation = SmOrientation::unknown;
  bool numeric_partials = false;

  /// Coupling with y = x and z = theta.
  Coupling coupling() const;
};

struct LatticeSpec {
  std::size_t nx = 64;
  std::size_t ntheta = 64;
  double x_cap = 50.0;      ///< truncation for unbounded x domains
  double theta_cap = 50.0;  ///< truncation for unbounded theta domains
};

struct SmReport {
  double min_gxtheta = 0.0;
  double max_gxtheta = 0.0;
  SmOrientation orientation = SmOrientation::unknown;
  bool multiplicative_ok = false;  ///< G*G_xtheta > G_x*G_theta where G > 0
  bool degenerate_theta = false;   ///< theta domain has zero width
  std::size_t points_checked = 0;
};

/// Named families: linear (g = theta*x), power (G = x^theta),
/// call ((x-theta)+), put ((theta-x)+), ratio (theta*x/(theta+x)),
/// tanh-additive (g = x^2 + theta*tanh x),
/// inverse-quadratic (g = -theta^2/(2(1+x))), separable
/// (g = h(x) + f(x) w(theta)). Throws UnknownFamilyError otherwise.
PayoffFamily builtin(const std::string& name,
                     const std::map<std::string, double>& params = {});

std::vector<std::string> builtin_names();

/// Samples g_xtheta over a lattice inside the (possibly truncated) domains
/// and reports the single-crossing orientation. Families whose cross-partial
/// changes sign get orientation unknown and are rejected for solver use.
SmReport verify_sm(const PayoffFamily& p, const LatticeSpec& spec = {});

/// Tabulated family on a lattice; partials by central finite differences,
/// flagged numeric.
PayoffFamily tabulated_family(std::string name, std::vector<double> x,
                              std::vector<double> theta,
                              std::vector<std::vector<double>> G_values);

}  // namespace stopcal
