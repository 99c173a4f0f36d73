#include "stopcal/forward.hpp"

#include <algorithm>
#include <cmath>

#include "stopcal/errors.hpp"

namespace stopcal {

ForwardSolution solve_forward(const Eigenfunction& X, const PayoffFamily& p,
                              double rho, const std::vector<double>& theta_grid,
                              const ForwardOptions& opt) {
  (void)rho;
  const SmReport sm = verify_sm(p);
  if (sm.orientation == SmOrientation::unknown) {
    throw MixedSignError("solve_forward: payoff fails single-crossing check");
  }

  Coupling cpl = p.coupling();
  cpl.sm = sm.orientation;

  DualOptions dopt;
  dopt.tie_tol = opt.tie_tol;
  dopt.refine = opt.refine;
  dopt.tail_extrapolate = true;
  dopt.tail_window = opt.tail_window;
  dopt.monotone_fast = opt.monotone_fast;

  DualResult dual = u_dual(X.psi, cpl, theta_grid, dopt);

  ForwardSolution sol{.v = dual.value,
                      .V = dual.value,
                      .x_star = SubdiffMap{X.psi.grid(), theta_grid, {}},
                      .orientation = sm.orientation};
  sol.x_star.sets = std::move(dual.argmax);
  sol.tail_sigma.assign(theta_grid.size(), -kInf);

  const std::size_t n = theta_grid.size();

  // The unattained nodes must form a suffix (forward) or prefix (reverse).
  if (sm.orientation == SmOrientation::increasing) {
    bool seen_empty = false;
    for (std::size_t j = 0; j < n; ++j) {
      if (!sol.attained(j)) {
        if (!seen_empty) {
          sol.theta_R = theta_grid[j];
          seen_empty = true;
        }
        sol.tail_sigma[j] = sol.v.value(j);
      } else if (seen_empty) {
        throw Error("solve_forward: attained node past theta_R breaks the "
                    "interval structure");
      }
    }
  } else {
    bool in_prefix = !sol.attained(0);
    if (in_prefix) sol.theta_L = theta_grid[0];
    for (std::size_t j = 0; j < n; ++j) {
      if (!sol.attained(j)) {
        if (!in_prefix) {
          throw Error("solve_forward: unattained node past theta_L breaks the "
                      "interval structure");
        }
        sol.theta_L = theta_grid[j];
        sol.tail_sigma[j] = sol.v.value(j);
      } else {
        in_prefix = false;
      }
    }
  }

  std::vector<double> big(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double lv = sol.v.value(j);
    big[j] = is_finite(lv) ? (lv > 700.0 ? kInf : std::exp(lv)) : kInf;
  }
  sol.V = GridFunction(theta_grid, std::move(big), Axis::theta);
  return sol;
}

ForwardSolution solve_forward(const SpeedMeasure& m, const PayoffFamily& p,
                              double rho, const std::vector<double>& theta_grid,
                              const ForwardOptions& opt) {
  return solve_forward(eigen_from_string(m, rho), p, rho, theta_grid, opt);
}

LipschitzReport lipschitz_report(const ForwardSolution& sol,
                                 std::size_t intervals) {
  LipschitzReport rep;
  const auto& tg = sol.v.grid();
  std::vector<std::size_t> att;
  for (std::size_t j = 0; j < tg.size(); ++j) {
    if (sol.attained(j) && sol.v.finite_at(j)) att.push_back(j);
  }
  if (att.size() < 2 || intervals == 0) return rep;

  const double lo = tg[att.front()];
  const double hi = tg[att.back()];
  const double w = (hi - lo) / static_cast<double>(intervals);
  rep.intervals.resize(intervals);
  for (std::size_t k = 0; k < intervals; ++k) {
    rep.intervals[k].lo = lo + static_cast<double>(k) * w;
    rep.intervals[k].hi = rep.intervals[k].lo + w;
  }
  for (std::size_t a = 0; a + 1 < att.size(); ++a) {
    const std::size_t j0 = att[a], j1 = att[a + 1];
    const double q = std::abs(sol.v.value(j1) - sol.v.value(j0)) /
                     (tg[j1] - tg[j0]);
    const double mid = 0.5 * (tg[j0] + tg[j1]);
    auto k = static_cast<std::size_t>((mid - lo) / w);
    k = std::min(k, intervals - 1);
    rep.intervals[k].max_quotient =
        std::max(rep.intervals[k].max_quotient, q);
    rep.overall = std::max(rep.overall, q);
  }
  // Flag a quotient blowing up at the range edge relative to the interior.
  std::vector<double> interior;
  for (std::size_t k = 0; k + 1 < intervals; ++k) {
    interior.push_back(rep.intervals[k].max_quotient);
  }
  if (!interior.empty()) {
    std::nth_element(interior.begin(), interior.begin() + interior.size() / 2,
                     interior.end());
    const double med = interior[interior.size() / 2];
    if (rep.intervals.back().max_quotient > 5.0 * std::max(med, 1e-12)) {
      rep.endpoint_divergent = true;
    }
  }
  return rep;
}

}  // namespace stopcal
