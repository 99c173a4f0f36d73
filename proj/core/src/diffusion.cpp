#include "stopcal/diffusion.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "stopcal/errors.hpp"

namespace stopcal {

namespace {

constexpr double kLogSwitch = 1e100;

double clamp_phi(double f) { return f > kPhiCap ? kInf : f; }

}  // namespace

void SpeedMeasure::validate() const {
  if (!(xi > 0.0)) {
    throw Error("SpeedMeasure: xi = 0 inputs are rejected");
  }
  if (mass_at_zero < 0.0) {
    throw Error("SpeedMeasure: negative mass at zero");
  }
  for (double v : density.values()) {
    if (is_finite(v) && v < 0.0) {
      throw Error("SpeedMeasure: negative density");
    }
  }
  double prev = 0.0;
  for (const Atom& a : atoms) {
    if (!(a.mass > 0.0)) {
      throw Error("SpeedMeasure: atom mass must be positive");
    }
    if (!(a.x > 0.0) || a.x >= xi) {
      throw Error("SpeedMeasure: atom locations must lie strictly inside (0, xi)");
    }
    if (a.x <= prev) {
      throw Error("SpeedMeasure: atoms must be sorted by location");
    }
    prev = a.x;
  }
  // Infinite density adjacent to the origin leaves no room for the string.
  if (!is_finite(density.value(0)) || !is_finite(density.value(1))) {
    throw DegenerateStringError("SpeedMeasure: infinite measure at the origin");
  }
}

Eigenfunction Eigenfunction::from_phi_values(GridFunction phi_values) {
  const auto& g = phi_values.grid();
  const auto& v = phi_values.values();
  const std::size_t n = g.size();
  std::vector<double> psi(n);
  std::vector<double> dphi(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    psi[i] = is_finite(v[i]) ? std::log(std::max(v[i], 1e-300)) : kInf;
  }
  const std::size_t fb = phi_values.finite_begin();
  const std::size_t fe = phi_values.finite_end();
  for (std::size_t i = fb; i < fe; ++i) {
    if (i > fb && i + 1 < fe) {
      dphi[i] = one_sided_slopes_ho(g, v, i).second;
    } else if (i + 1 < fe) {
      // Right slope at the first finite node via the three-point stencil.
      if (i + 2 < fe) {
        const double h1 = g[i + 1] - g[i];
        const double h2 = g[i + 2] - g[i + 1];
        dphi[i] = -((2.0 * h1 + h2) / (h1 * (h1 + h2))) * v[i] +
                  ((h1 + h2) / (h1 * h2)) * v[i + 1] -
                  (h1 / (h2 * (h1 + h2))) * v[i + 2];
      } else {
        dphi[i] = (v[i + 1] - v[i]) / (g[i + 1] - g[i]);
      }
    } else if (i > fb) {
      dphi[i] = (v[i] - v[i - 1]) / (g[i] - g[i - 1]);
    }
  }
  Eigenfunction e;
  e.psi = GridFunction(g, std::move(psi), phi_values.axis());
  e.phi = std::move(phi_values);
  e.dphi = std::move(dphi);
  if (fe < n && fe > 0) {
    e.xi = g[fe - 1];
    e.xi_kind = XiKind::absorbing;
  }
  return e;
}

void Eigenfunction::validate(double tol) const {
  if (std::abs(phi.value(0) - 1.0) > tol) {
    throw NotNormalizedError("Eigenfunction: phi(0) != 1");
  }
  const auto& g = phi.grid();
  const auto& v = phi.values();
  double scale = 1.0;
  for (std::size_t i = phi.finite_begin(); i + 1 < phi.finite_end(); ++i) {
    scale = std::max(scale, std::abs(v[i]));
    if (v[i + 1] < v[i] - tol * scale) {
      throw NotConvexError("Eigenfunction: phi must be nondecreasing");
    }
  }
  for (std::size_t i = phi.finite_begin() + 1; i + 1 < phi.finite_end(); ++i) {
    const auto [sl, sr] = one_sided_slopes(g, v, i);
    if (sr - sl < -tol * std::max(1.0, std::abs(v[i]))) {
      throw NotConvexError("Eigenfunction: negative curvature at node " +
                           std::to_string(i));
    }
  }
}

namespace {

struct MarchState {
  double f = 1.0;
  double df = 0.0;
  bool log_space = false;
  double psi = 0.0;
  double dpsi = 0.0;
};

/// One implicit-trapezoid step of f'' = q f across [x0, x1]. Exactly
/// satisfies df1 = df0 + h/2 (q0 f0 + q1 f1).
void step_density(MarchState& s, double h, double q0, double q1) {
  if (!s.log_space) {
    const double denom = 1.0 - h * h * q1 / 4.0;
    if (denom <= 0.0) {
      throw Error("eigenfunction march: grid too coarse for the density");
    }
    const double f1 = (s.f * (1.0 + h * h * q0 / 4.0) + h * s.df) / denom;
    const double df1 = s.df + 0.5 * h * (q0 * s.f + q1 * f1);
    s.f = f1;
    s.df = df1;
    s.psi = std::log(std::max(s.f, 1e-300));
    s.dpsi = s.df / s.f;
    if (s.f > kLogSwitch) {
      s.log_space = true;
    }
    return;
  }
  // Riccati form: psi'' = q - (psi')^2, implicit trapezoid in psi'.
  const double B = s.dpsi + 0.5 * h * (q0 + q1 - s.dpsi * s.dpsi);
  const double disc = 1.0 + 2.0 * h * B;
  const double dpsi1 =
      disc >= 0.0 ? (-1.0 + std::sqrt(disc)) / h : s.dpsi;
  s.psi += 0.5 * h * (s.dpsi + dpsi1);
  s.dpsi = dpsi1;
  s.f = s.psi > 700.0 ? kInf : std::exp(s.psi);
  s.df = is_finite(s.f) ? s.f * s.dpsi : kInf;
}

struct MergedNode {
  double x = 0.0;
  double q = 0.0;       ///< 2 rho density
  double atom = 0.0;    ///< point mass at this node
};

std::vector<MergedNode> merge_grid(const SpeedMeasure& m, double rho) {
  const auto& g = m.density.grid();
  const auto& d = m.density.values();
  std::vector<MergedNode> nodes;
  nodes.reserve(g.size() + m.atoms.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    double q = is_finite(d[i]) ? 2.0 * rho * d[i] : 0.0;
    nodes.push_back({g[i], q, 0.0});
  }
  for (const Atom& a : m.atoms) {
    auto it = std::lower_bound(
        nodes.begin(), nodes.end(), a.x,
        [](const MergedNode& n, double x) { return n.x < x; });
    if (it != nodes.end() && std::abs(it->x - a.x) < 1e-12 * (1.0 + a.x)) {
      it->atom += a.mass;
    } else {
      const double q = 2.0 * rho * std::max(0.0, m.density.interpolate(a.x) ==
                                                     kInf
                                                 ? 0.0
                                                 : m.density.interpolate(a.x));
      nodes.insert(it, {a.x, q, a.mass});
    }
  }
  return nodes;
}

Eigenfunction march_string(const SpeedMeasure& m, double rho) {
  m.validate();
  const auto nodes = merge_grid(m, rho);
  const std::size_t n = nodes.size();
  std::vector<double> grid(n), phi(n), psi(n), dphi(n);

  MarchState s;
  s.f = 1.0;
  s.df = 2.0 * rho * m.mass_at_zero * s.f;  // reflecting boundary with mass
  s.psi = 0.0;
  s.dpsi = s.df;
  grid[0] = nodes[0].x;
  phi[0] = 1.0;
  psi[0] = 0.0;
  if (nodes[0].atom > 0.0) {
    s.df += 2.0 * rho * s.f * nodes[0].atom;
    s.dpsi = s.df / s.f;
  }
  dphi[0] = s.df;

  for (std::size_t i = 1; i < n; ++i) {
    const double h = nodes[i].x - nodes[i - 1].x;
    step_density(s, h, nodes[i - 1].q, nodes[i].q);
    if (nodes[i].atom > 0.0) {
      if (!s.log_space) {
        s.df += 2.0 * rho * s.f * nodes[i].atom;
        s.dpsi = s.df / s.f;
      } else {
        s.dpsi += 2.0 * rho * nodes[i].atom;
      }
    }
    grid[i] = nodes[i].x;
    phi[i] = clamp_phi(s.f);
    psi[i] = s.psi;
    dphi[i] = s.df;
  }

  Eigenfunction e;
  e.phi = GridFunction(grid, std::move(phi), Axis::x);
  e.psi = GridFunction(std::move(grid), std::move(psi), Axis::x);
  e.dphi = std::move(dphi);
  e.xi = m.xi;
  e.xi_kind = m.xi_kind;
  return e;
}

}  // namespace

Eigenfunction eigen_from_density(const SpeedMeasure& m, double rho) {
  if (!m.atoms.empty()) {
    throw Error("eigen_from_density: measure has atoms; use eigen_from_string");
  }
  return march_string(m, rho);
}

Eigenfunction eigen_from_string(const SpeedMeasure& m, double rho) {
  return march_string(m, rho);
}

SpeedMeasure speed_from_eigen(const Eigenfunction& e, double rho,
                              const SpeedRecoveryOptions& opt) {
  const auto& g = e.phi.grid();
  const auto& v = e.phi.values();
  const std::size_t fb = e.phi.finite_begin();
  const std::size_t fe = e.phi.finite_end();
  if (fe - fb < 3) {
    throw Error("speed_from_eigen: need at least three finite nodes");
  }
  if (std::abs(v[fb] - 1.0) > 1e-6 || g[fb] != 0.0) {
    if (std::abs(v[fb] - 1.0) > 1e-6) {
      throw NotNormalizedError("speed_from_eigen: phi(0) != 1");
    }
  }

  std::vector<double> density(g.size(), 0.0);
  std::vector<Atom> atoms;

  auto sd_at = [&](std::size_t i) {
    return second_difference(g, v, i);
  };

  for (std::size_t i = fb + 1; i + 1 < fe; ++i) {
    const double scale = std::max(1.0, std::abs(v[i]));
    const auto [sl, sr] = one_sided_slopes_ho(g, v, i);
    const double jump = sr - sl;
    const double h_loc = 0.5 * (g[i + 1] - g[i - 1]);
    // Smooth curvature estimated away from the node itself.
    double curv = 0.0;
    if (i >= fb + 2) curv = std::max(curv, std::abs(sd_at(i - 1)));
    if (i + 2 < fe) curv = std::max(curv, std::abs(sd_at(i + 1)));
    const double threshold =
        opt.kink_factor * curv * h_loc + opt.rel_floor * scale;
    if (jump < -threshold) {
      throw NotConvexError("speed_from_eigen: concave kink at x = " +
                           std::to_string(g[i]));
    }
    if (jump > threshold) {
      atoms.push_back({g[i], jump / (2.0 * rho * v[i])});
      double side = 0.0;
      int sides = 0;
      if (i >= fb + 2) {
        side += std::max(0.0, sd_at(i - 1));
        ++sides;
      }
      if (i + 2 < fe) {
        side += std::max(0.0, sd_at(i + 1));
        ++sides;
      }
      density[i] = sides > 0 ? side / sides / (2.0 * rho * v[i]) : 0.0;
    } else {
      const double curv_c = std::max(0.0, sd_at(i));
      if (curv_c < -1e-7 * scale) {
        throw NotConvexError("speed_from_eigen: negative curvature");
      }
      density[i] = curv_c / (2.0 * rho * v[i]);
    }
  }
  density[fb] = density[fb + 1];
  density[fe - 1] = density[fe - 2];

  SpeedMeasure m;
  m.density = GridFunction(std::vector<double>(g.begin(), g.end()),
                           std::move(density), Axis::x);
  m.atoms = std::move(atoms);
  // Mass at the origin shows up as a positive right-derivative at 0.
  double sl0 = e.dphi.empty() ? 0.0 : e.dphi[fb];
  if (fe - fb >= 3) {
    const double h1 = g[fb + 1] - g[fb];
    const double h2 = g[fb + 2] - g[fb + 1];
    sl0 = -((2.0 * h1 + h2) / (h1 * (h1 + h2))) * v[fb] +
          ((h1 + h2) / (h1 * h2)) * v[fb + 1] -
          (h1 / (h2 * (h1 + h2))) * v[fb + 2];
  }
  m.mass_at_zero = sl0 > 1e-7 ? sl0 / (2.0 * rho) : 0.0;
  if (fe < g.size()) {
    m.xi = g[fe - 1];
    m.xi_kind = XiKind::absorbing;
  } else {
    m.xi = e.xi;
    m.xi_kind = e.xi_kind;
  }
  return m;
}

Eigenfunction eigen_with_scale(const ScaleSpec& scale,
                               const std::vector<double>& grid, double rho) {
  if (!scale.mu || !scale.sigma) {
    throw Error("eigen_with_scale: smooth case needs mu and sigma");
  }
  const std::size_t n = grid.size();
  std::vector<double> phi(n), psi(n), dphi(n);
  auto a = [&](double x) {
    const double s = scale.sigma(x);
    return 2.0 * rho / (s * s);
  };
  auto b = [&](double x) {
    const double s = scale.sigma(x);
    return 2.0 * scale.mu(x) / (s * s);
  };
  double f = 1.0, df = 0.0;
  phi[0] = 1.0;
  psi[0] = 0.0;
  dphi[0] = 0.0;
  for (std::size_t i = 1; i < n; ++i) {
    const double h = grid[i] - grid[i - 1];
    const double a0 = a(grid[i - 1]), a1 = a(grid[i]);
    const double b0 = b(grid[i - 1]), b1 = b(grid[i]);
    const double lhs = 1.0 + 0.5 * h * b1 - 0.25 * h * h * a1;
    if (lhs <= 0.0) {
      throw Error("eigen_with_scale: grid too coarse");
    }
    const double rhs =
        df * (1.0 - 0.5 * h * b0 + 0.25 * h * h * a1) + 0.5 * h * f * (a0 + a1);
    const double df1 = rhs / lhs;
    const double f1 = f + 0.5 * h * (df + df1);
    f = f1;
    df = df1;
    phi[i] = clamp_phi(f);
    psi[i] = std::log(std::max(f, 1e-300));
    dphi[i] = df;
  }
  Eigenfunction e;
  e.phi = GridFunction(grid, std::move(phi), Axis::x);
  e.psi = GridFunction(grid, std::move(psi), Axis::x);
  e.dphi = std::move(dphi);
  return e;
}

GridFunction stock_vol_from_eigen(const GridFunction& phi, double rho,
                                  double delta) {
  const auto& g = phi.grid();
  const auto& v = phi.values();
  std::vector<double> eta(g.size(), kInf);
  for (std::size_t i = 1; i + 1 < g.size(); ++i) {
    if (!phi.finite_at(i - 1) || !phi.finite_at(i) || !phi.finite_at(i + 1)) {
      continue;
    }
    const double x = g[i];
    if (!(x > 0.0)) continue;
    const double curv = second_difference(g, v, i);
    if (curv <= 1e-12 * std::max(1.0, std::abs(v[i]))) {
      continue;  // reported as a gap
    }
    const auto [sl, sr] = one_sided_slopes(g, v, i);
    const double dp = 0.5 * (sl + sr);
    const double num = 2.0 * (rho * v[i] - (rho - delta) * x * dp);
    const double e2 = num / (x * x * curv);
    if (e2 > 0.0) {
      eta[i] = std::sqrt(e2);
    }
  }
  return GridFunction(std::vector<double>(g.begin(), g.end()), std::move(eta),
                      phi.axis());
}

double string_residual(const Eigenfunction& e, const SpeedMeasure& m,
                       double rho) {
  const auto nodes = merge_grid(m, rho);
  const auto& g = e.phi.grid();
  const auto& v = e.phi.values();
  double worst = 0.0;
  std::size_t k = 0;
  std::vector<double> atom_at(g.size(), 0.0);
  for (std::size_t i = 0; i < g.size(); ++i) {
    while (k < nodes.size() && nodes[k].x < g[i] - 1e-12) ++k;
    if (k < nodes.size() && std::abs(nodes[k].x - g[i]) < 1e-9 * (1.0 + g[i])) {
      atom_at[i] = nodes[k].atom;
    }
  }
  for (std::size_t i = 0; i + 1 < g.size(); ++i) {
    if (!is_finite(v[i]) || !is_finite(v[i + 1]) || v[i] > kLogSwitch ||
        v[i + 1] > kLogSwitch) {
      continue;
    }
    const double h = g[i + 1] - g[i];
    const double q0 = 2.0 * rho * std::max(0.0, m.density.interpolate(g[i]) ==
                                                    kInf
                                                ? 0.0
                                                : m.density.interpolate(g[i]));
    const double q1 =
        2.0 * rho * std::max(0.0, m.density.interpolate(g[i + 1]) == kInf
                                      ? 0.0
                                      : m.density.interpolate(g[i + 1]));
    const double jump_i = 2.0 * rho * v[i] * atom_at[i];
    const double jump_n = 2.0 * rho * v[i + 1] * atom_at[i + 1];
    const double lhs = (e.dphi[i + 1] - jump_n) - (e.dphi[i] - jump_i);
    const double rhs = jump_i + 0.5 * h * (q0 * v[i] + q1 * v[i + 1]);
    const double denom = 1.0 + std::abs(e.dphi[i]) + std::abs(rhs);
    worst = std::max(worst, std::abs(lhs - rhs) / denom);
  }
  return worst;
}

}  // namespace stopcal
