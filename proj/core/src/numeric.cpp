#include "stopcal/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>

#include "stopcal/errors.hpp"

namespace stopcal {

double second_difference(std::span<const double> grid,
                         std::span<const double> values, std::size_t i) {
  if (i == 0 || i + 1 >= grid.size()) {
    throw BoundaryIndexError("second_difference: interior index required");
  }
  const double hl = grid[i] - grid[i - 1];
  const double hr = grid[i + 1] - grid[i];
  const double sl = (values[i] - values[i - 1]) / hl;
  const double sr = (values[i + 1] - values[i]) / hr;
  return 2.0 * (sr - sl) / (hl + hr);
}

std::pair<double, double> one_sided_slopes(std::span<const double> grid,
                                           std::span<const double> values,
                                           std::size_t i) {
  if (i == 0 || i + 1 >= grid.size()) {
    throw BoundaryIndexError("one_sided_slopes: interior index required");
  }
  const double sl = (values[i] - values[i - 1]) / (grid[i] - grid[i - 1]);
  const double sr = (values[i + 1] - values[i]) / (grid[i + 1] - grid[i]);
  return {sl, sr};
}

std::pair<double, double> one_sided_slopes_ho(std::span<const double> grid,
                                              std::span<const double> values,
                                              std::size_t i) {
  auto [sl, sr] = one_sided_slopes(grid, values, i);
  // Three-point stencil on each side where available. For nonuniform grids
  // the quadratic through (x_{i-2}, x_{i-1}, x_i) has derivative at x_i:
  if (i >= 2) {
    const double h1 = grid[i - 1] - grid[i - 2];
    const double h2 = grid[i] - grid[i - 1];
    const double f0 = values[i - 2], f1 = values[i - 1], f2 = values[i];
    sl = (h2 / (h1 * (h1 + h2))) * f0 - ((h1 + h2) / (h1 * h2)) * f1 +
         ((h1 + 2.0 * h2) / (h2 * (h1 + h2))) * f2;
  }
  if (i + 2 < grid.size()) {
    const double h1 = grid[i + 1] - grid[i];
    const double h2 = grid[i + 2] - grid[i + 1];
    const double f0 = values[i], f1 = values[i + 1], f2 = values[i + 2];
    sr = -((2.0 * h1 + h2) / (h1 * (h1 + h2))) * f0 +
         ((h1 + h2) / (h1 * h2)) * f1 - (h1 / (h2 * (h1 + h2))) * f2;
  }
  return {sl, sr};
}

TailEstimate tail_limsup(std::span<const double> x, std::span<const double> d) {
  TailEstimate out;
  const std::size_t n = x.size();
  if (n < 4) {
    out.diverged = true;
    return out;
  }
  // Growth rates per unit length over the window.
  std::vector<double> rx, rr;
  rx.reserve(n - 1);
  rr.reserve(n - 1);
  for (std::size_t i = 1; i < n; ++i) {
    const double h = x[i] - x[i - 1];
    const double r = (d[i] - d[i - 1]) / h;
    if (!(r > 0.0)) {
      // Flat or non-monotone inside the window: the last node is still the
      // max, treat the value as already settled.
      out.limit = d[n - 1];
      out.extrapolated = false;
      return out;
    }
    rx.push_back(0.5 * (x[i] + x[i - 1]));
    rr.push_back(r);
  }
  if (rr.back() >= 0.999 * rr.front()) {
    out.diverged = true;
    return out;
  }
  // Least-squares fit log r = a + b x; remaining mass = r_last / (-b).
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double m = static_cast<double>(rr.size());
  for (std::size_t i = 0; i < rr.size(); ++i) {
    const double lx = rx[i];
    const double ly = std::log(rr[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double denom = m * sxx - sx * sx;
  if (denom <= 0.0) {
    out.diverged = true;
    return out;
  }
  const double b = (m * sxy - sx * sy) / denom;
  if (b >= 0.0) {
    out.diverged = true;
    return out;
  }
  const double remaining = rr.back() / (-b);
  const double scale = 1.0 + std::abs(d[n - 1]);
  if (remaining > 1e3 * scale) {
    out.diverged = true;
    return out;
  }
  out.limit = d[n - 1] + remaining;
  out.extrapolated = true;
  return out;
}

double golden_max(const std::function<double(double)>& fn, double a, double b,
                  double xtol, double* arg_out) {
  constexpr double invphi = 0.6180339887498949;
  double x1 = b - invphi * (b - a);
  double x2 = a + invphi * (b - a);
  double f1 = fn(x1);
  double f2 = fn(x2);
  while (b - a > xtol) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + invphi * (b - a);
      f2 = fn(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - invphi * (b - a);
      f1 = fn(x1);
    }
  }
  const double xm = 0.5 * (a + b);
  if (arg_out != nullptr) {
    *arg_out = xm;
  }
  return fn(xm);
}

std::vector<double> make_grid(double lo, double hi, double step) {
  if (!(step > 0.0) || !(hi > lo)) {
    throw Error("make_grid: need hi > lo and step > 0");
  }
  std::vector<double> g;
  const auto n = static_cast<std::size_t>(std::floor((hi - lo) / step + 0.5));
  g.reserve(n + 2);
  for (std::size_t i = 0; i <= n; ++i) {
    g.push_back(lo + static_cast<double>(i) * step);
  }
  if (g.back() < hi - 0.25 * step) {
    g.push_back(hi);
  } else {
    g.back() = hi;
  }
  return g;
}

std::vector<double> lower_convex_hull(std::span<const double> x,
                                      std::span<const double> y) {
  const std::size_t n = x.size();
  std::vector<std::size_t> stack;
  stack.reserve(n);
  auto cross_ok = [&](std::size_t a, std::size_t b, std::size_t c) {
    // Keep b if it lies strictly below the chord a-c.
    const double lhs = (y[b] - y[a]) * (x[c] - x[a]);
    const double rhs = (y[c] - y[a]) * (x[b] - x[a]);
    return lhs < rhs;
  };
  for (std::size_t i = 0; i < n; ++i) {
    if (!is_finite(y[i])) {
      continue;
    }
    while (stack.size() >= 2 &&
           !cross_ok(stack[stack.size() - 2], stack.back(), i)) {
      stack.pop_back();
    }
    stack.push_back(i);
  }
  std::vector<double> hull(n, kInf);
  if (stack.empty()) {
    return hull;
  }
  std::size_t seg = 0;
  for (std::size_t i = 0; i < n; ++i) {
    while (seg + 1 < stack.size() && x[stack[seg + 1]] < x[i]) {
      ++seg;
    }
    const std::size_t a = stack[seg];
    const std::size_t b = stack[std::min(seg + 1, stack.size() - 1)];
    if (a == b || x[i] <= x[a]) {
      hull[i] = y[a] + (x[i] - x[a]) * 0.0;
      if (x[i] < x[a]) hull[i] = kInf;
      if (x[i] == x[a]) hull[i] = y[a];
      continue;
    }
    if (x[i] > x[b]) {
      hull[i] = (i == b) ? y[b] : kInf;
      continue;
    }
    const double t = (x[i] - x[a]) / (x[b] - x[a]);
    hull[i] = y[a] + t * (y[b] - y[a]);
  }
  return hull;
}

}  // namespace stopcal
