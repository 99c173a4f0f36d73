#include "stopcal/uconvex.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "stopcal/errors.hpp"

namespace stopcal {

Coupling Coupling::transposed() const {
  Coupling t;
  const auto e = eval;
  t.eval = [e](double z, double y) { return e(y, z); };
  if (d_z) {
    const auto f = d_z;
    t.d_y = [f](double z, double y) { return f(y, z); };
  }
  if (d_y) {
    const auto f = d_y;
    t.d_z = [f](double z, double y) { return f(y, z); };
  }
  if (d_yz) {
    const auto f = d_yz;
    t.d_yz = [f](double z, double y) { return f(y, z); };
  }
  t.y_domain = z_domain;
  t.z_domain = y_domain;
  t.sm = sm;
  return t;
}

namespace {

struct RowScan {
  double best = -kInf;
  std::vector<std::pair<std::size_t, double>> ties;

  double tie_abs(double tol) const { return tol * (1.0 + std::abs(best)); }

  void offer(std::size_t idx, double val, double tol) {
    if (val == -kInf) return;
    if (val > best) {
      best = val;
      const double cut = best - tie_abs(tol);
      std::erase_if(ties, [cut](const auto& p) { return p.second < cut; });
      ties.emplace_back(idx, val);
    } else if (val >= best - tie_abs(tol)) {
      ties.emplace_back(idx, val);
    }
  }
};

/// Scans y-nodes [ylo, yhi] of f for max of u(y, z) - f(y).
RowScan scan_row(const GridFunction& f, const Coupling& u, double z,
                 std::size_t ylo, std::size_t yhi, double tie_tol) {
  RowScan rs;
  for (std::size_t i = ylo; i <= yhi; ++i) {
    if (!f.finite_at(i)) continue;
    const double uv = u.eval(f.coord(i), z);
    if (uv == -kInf || !(uv < kInf)) continue;
    rs.offer(i, uv - f.value(i), tie_tol);
  }
  return rs;
}

void fill_node(const GridFunction& f, const Coupling& u, double z,
               const DualOptions& opt, const RowScan& rs, double& value_out,
               ArgmaxSet& am) {
  const std::size_t last_fin = f.finite_end() - 1;
  if (rs.ties.empty()) {
    // Every candidate excluded: outside the effective domain of the dual.
    value_out = kInf;
    return;
  }
  value_out = rs.best;
  am.ties.clear();
  for (const auto& [idx, val] : rs.ties) {
    am.ties.push_back(idx);
  }
  std::sort(am.ties.begin(), am.ties.end());
  am.ties.erase(std::unique(am.ties.begin(), am.ties.end()), am.ties.end());
  am.lo = am.ties.front();
  am.hi = am.ties.back();
  am.rep = am.lo;
  am.rep_coord = f.coord(am.rep);

  const bool grid_open = u.y_domain.upper_open_at(f.grid().back());
  am.at_open_boundary = (am.ties.size() == 1 && am.hi == last_fin &&
                         last_fin + 1 == f.size() && grid_open);

  if (am.at_open_boundary && opt.tail_extrapolate) {
    const std::size_t fb = f.finite_begin();
    const std::size_t count = f.finite_end() - fb;
    std::size_t w = std::max<std::size_t>(
        4, static_cast<std::size_t>(opt.tail_window * static_cast<double>(count)));
    w = std::min(w, count);
    std::vector<double> xs, ds;
    xs.reserve(w);
    ds.reserve(w);
    for (std::size_t i = f.finite_end() - w; i < f.finite_end(); ++i) {
      const double uv = u.eval(f.coord(i), z);
      if (uv == -kInf) continue;
      xs.push_back(f.coord(i));
      ds.push_back(uv - f.value(i));
    }
    const TailEstimate te = tail_limsup(xs, ds);
    if (te.diverged) {
      value_out = kInf;
    } else {
      value_out = std::max(value_out, te.limit);
      am.extrapolated = te.extrapolated;
    }
    return;
  }

  if (opt.refine && am.attained() && am.rep > f.finite_begin() &&
      am.rep < last_fin) {
    const double a = f.coord(am.rep - 1);
    const double b = f.coord(am.rep + 1);
    auto local = [&](double y) {
      const double fv = f.interpolate(y);
      if (!is_finite(fv)) return -kInf;
      const double uv = u.eval(y, z);
      if (uv == -kInf) return -kInf;
      return uv - fv;
    };
    double arg = am.rep_coord;
    const double ref = golden_max(local, a, b, 1e-10 * (b - a) + 1e-14, &arg);
    if (ref > value_out) {
      value_out = ref;
      am.rep_coord = arg;
    }
  }
}

void dual_bruteforce(const GridFunction& f, const Coupling& u,
                     const std::vector<double>& zs, const DualOptions& opt,
                     std::vector<double>& vals, std::vector<ArgmaxSet>& ams) {
  for (std::size_t j = 0; j < zs.size(); ++j) {
    const RowScan rs = scan_row(f, u, zs[j], f.finite_begin(),
                                f.finite_end() - 1, opt.tie_tol);
    fill_node(f, u, zs[j], opt, rs, vals[j], ams[j]);
  }
}

/// Divide-and-conquer over output nodes using monotonicity of the argmax.
void dual_monotone(const GridFunction& f, const Coupling& u,
                   const std::vector<double>& zs, const DualOptions& opt,
                   bool increasing, std::size_t zlo, std::size_t zhi,
                   std::size_t ylo, std::size_t yhi, std::vector<double>& vals,
                   std::vector<ArgmaxSet>& ams) {
  if (zlo > zhi || zhi == kNoIndex) return;
  const std::size_t zm = zlo + (zhi - zlo) / 2;
  const RowScan rs = scan_row(f, u, zs[zm], ylo, yhi, opt.tie_tol);
  fill_node(f, u, zs[zm], opt, rs, vals[zm], ams[zm]);
  std::size_t pivot_lo = ylo, pivot_hi = yhi;
  if (!ams[zm].empty()) {
    pivot_lo = ams[zm].lo;
    pivot_hi = ams[zm].hi;
  }
  if (zm > zlo) {
    if (increasing) {
      dual_monotone(f, u, zs, opt, increasing, zlo, zm - 1, ylo, pivot_hi, vals,
                    ams);
    } else {
      dual_monotone(f, u, zs, opt, increasing, zlo, zm - 1, pivot_lo, yhi, vals,
                    ams);
    }
  }
  if (zm < zhi) {
    if (increasing) {
      dual_monotone(f, u, zs, opt, increasing, zm + 1, zhi, pivot_lo, yhi, vals,
                    ams);
    } else {
      dual_monotone(f, u, zs, opt, increasing, zm + 1, zhi, ylo, pivot_hi, vals,
                    ams);
    }
  }
}

}  // namespace

DualResult u_dual(const GridFunction& f, const Coupling& u,
                  const std::vector<double>& out_grid, const DualOptions& opt) {
  if (f.finite_count() == 0) {
    throw EmptyEffectiveDomainError("u_dual: input is identically +inf");
  }
  if (!u.eval) {
    throw Error("u_dual: coupling has no evaluator");
  }
  std::vector<double> vals(out_grid.size(), kInf);
  std::vector<ArgmaxSet> ams(out_grid.size());
  if (opt.monotone_fast && u.sm != SmOrientation::unknown) {
    dual_monotone(f, u, out_grid, opt, u.sm == SmOrientation::increasing, 0,
                  out_grid.size() - 1, f.finite_begin(), f.finite_end() - 1,
                  vals, ams);
  } else {
    dual_bruteforce(f, u, out_grid, opt, vals, ams);
  }
  Axis out_axis = (f.axis() == Axis::x) ? Axis::theta : Axis::x;
  return DualResult{GridFunction(out_grid, std::move(vals), out_axis),
                    std::move(ams)};
}

DualResult u_double_dual(const GridFunction& f, const Coupling& u,
                         const std::vector<double>& dual_grid,
                         const DualOptions& opt) {
  DualResult fu = u_dual(f, u, dual_grid, opt);
  return u_dual(fu.value, u.transposed(), f.grid(), opt);
}

UConvexReport is_u_convex(const GridFunction& f, const Coupling& u,
                          const std::vector<double>& dual_grid, double tol,
                          const DualOptions& opt) {
  DualResult dd = u_double_dual(f, u, dual_grid, opt);
  double dev = 0.0;
  double scale = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (!f.finite_at(i)) continue;
    scale = std::max(scale, std::abs(f.value(i)));
    if (!dd.value.finite_at(i)) {
      dev = kInf;
      break;
    }
    dev = std::max(dev, std::abs(f.value(i) - dd.value.value(i)));
  }
  return UConvexReport{dev <= tol * (1.0 + scale), dev};
}

SubdiffMap subdifferential(const GridFunction& f, const Coupling& u,
                           const std::vector<double>& dual_grid, double tol,
                           const DualOptions& opt) {
  DualResult fu = u_dual(f, u, dual_grid, opt);
  DualResult dd = u_dual(fu.value, u.transposed(), f.grid(), opt);
  double dev = 0.0;
  double scale = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (!f.finite_at(i)) continue;
    scale = std::max(scale, std::abs(f.value(i)));
    if (!dd.value.finite_at(i)) continue;
    dev = std::max(dev, std::abs(f.value(i) - dd.value.value(i)));
  }
  if (dev > tol * (1.0 + scale)) {
    throw NotUConvexError("subdifferential: double-dual deviation " +
                          std::to_string(dev));
  }
  SubdiffMap sd;
  sd.input_grid = f.grid();
  sd.value_grid = dual_grid;
  sd.sets = std::move(dd.argmax);
  return sd;
}

bool check_monotone(const SubdiffMap& sd, SmOrientation orientation) {
  if (orientation == SmOrientation::unknown) return false;
  const double span =
      sd.value_grid.empty() ? 1.0 : sd.value_grid.back() - sd.value_grid.front();
  const double slack = 1e-9 * (1.0 + std::abs(span));
  double prev = 0.0;
  bool have_prev = false;
  for (std::size_t i = 0; i < sd.sets.size(); ++i) {
    if (!sd.sets[i].attained()) continue;
    const double cur = sd.sets[i].rep_coord;
    if (have_prev) {
      if (orientation == SmOrientation::increasing && cur < prev - slack) {
        return false;
      }
      if (orientation == SmOrientation::decreasing && cur > prev + slack) {
        return false;
      }
    }
    prev = cur;
    have_prev = true;
  }
  return true;
}

}  // namespace stopcal
