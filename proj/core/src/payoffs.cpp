#include "stopcal/payoffs.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <utility>

#include "stopcal/errors.hpp"

namespace stopcal {

Coupling PayoffFamily::coupling() const {
  Coupling c;
  c.eval = g;
  c.d_y = g_x;
  c.d_z = g_theta;
  c.d_yz = g_xtheta;
  c.y_domain = x_domain;
  c.z_domain = theta_domain;
  c.sm = sm_orientation;
  return c;
}

namespace {

double param(const std::map<std::string, double>& p, const std::string& key,
             double fallback) {
  auto it = p.find(key);
  return it == p.end() ? fallback : it->second;
}

PayoffFamily make_linear(const std::map<std::string, double>& prm) {
  PayoffFamily f;
  f.name = "linear";
  f.g = [](double x, double t) { return t * x; };
  f.G = [](double x, double t) { return std::exp(t * x); };
  f.g_x = [](double, double t) { return t; };
  f.g_theta = [](double x, double) { return x; };
  f.g_xtheta = [](double, double) { return 1.0; };
  f.x_domain = {0.0, kInf, false, true};
  f.theta_domain = {param(prm, "theta_min", 0.0), param(prm, "theta_max", kInf),
                    true, true};
  f.monotone_in_x = MonotoneInX::nondecreasing;
  f.sm_orientation = SmOrientation::increasing;
  return f;
}

PayoffFamily make_power(const std::map<std::string, double>& prm) {
  PayoffFamily f;
  f.name = "power";
  f.g = [](double x, double t) {
    return x > 0.0 ? t * std::log(x) : -kInf;
  };
  f.G = [](double x, double t) { return x > 0.0 ? std::pow(x, t) : 0.0; };
  f.g_x = [](double x, double t) { return t / x; };
  f.g_theta = [](double x, double) { return std::log(x); };
  f.g_xtheta = [](double x, double) { return 1.0 / x; };
  f.x_domain = {0.0, kInf, false, true};
  f.theta_domain = {param(prm, "theta_min", 0.0), param(prm, "theta_max", kInf),
                    true, true};
  f.monotone_in_x = MonotoneInX::nondecreasing;
  f.sm_orientation = SmOrientation::increasing;
  return f;
}

PayoffFamily make_call(const std::map<std::string, double>& prm) {
  PayoffFamily f;
  f.name = "call";
  f.g = [](double x, double t) {
    return x > t ? std::log(x - t) : -kInf;
  };
  f.G = [](double x, double t) { return std::max(x - t, 0.0); };
  f.g_x = [](double x, double t) { return 1.0 / (x - t); };
  f.g_theta = [](double x, double t) { return -1.0 / (x - t); };
  f.g_xtheta = [](double x, double t) {
    const double d = x - t;
    return 1.0 / (d * d);
  };
  f.x_domain = {0.0, kInf, false, true};
  f.theta_domain = {param(prm, "theta_min", -kInf),
                    param(prm, "theta_max", kInf), true, true};
  f.monotone_in_x = MonotoneInX::nondecreasing;
  f.sm_orientation = SmOrientation::increasing;
  return f;
}

PayoffFamily make_put(const std::map<std::string, double>& prm) {
  PayoffFamily f;
  f.name = "put";
  f.g = [](double x, double t) {
    return t > x ? std::log(t - x) : -kInf;
  };
  f.G = [](double x, double t) { return std::max(t - x, 0.0); };
  f.g_x = [](double x, double t) { return -1.0 / (t - x); };
  f.g_theta = [](double x, double t) { return 1.0 / (t - x); };
  f.g_xtheta = [](double x, double t) {
    const double d = t - x;
    return 1.0 / (d * d);
  };
  f.x_domain = {0.0, kInf, false, true};
  f.theta_domain = {param(prm, "theta_min", 0.0), param(prm, "theta_max", kInf),
                    true, true};
  f.monotone_in_x = MonotoneInX::nonincreasing;
  f.sm_orientation = SmOrientation::decreasing;
  return f;
}

PayoffFamily make_ratio(const std::map<std::string, double>& prm) {
  PayoffFamily f;
  f.name = "ratio";
  f.g = [](double x, double t) {
    return (x > 0.0 && t > 0.0) ? std::log(t * x / (t + x)) : -kInf;
  };
  f.G = [](double x, double t) {
    return (x > 0.0 && t > 0.0) ? t * x / (t + x) : 0.0;
  };
  f.g_x = [](double x, double t) { return 1.0 / x - 1.0 / (t + x); };
  f.g_theta = [](double x, double t) { return 1.0 / t - 1.0 / (t + x); };
  f.g_xtheta = [](double x, double t) {
    const double s = t + x;
    return 1.0 / (s * s);
  };
  f.x_domain = {0.0, kInf, false, true};
  f.theta_domain = {param(prm, "theta_min", 0.0), param(prm, "theta_max", kInf),
                    true, true};
  f.monotone_in_x = MonotoneInX::nondecreasing;
  f.sm_orientation = SmOrientation::increasing;
  return f;
}

PayoffFamily make_tanh_additive(const std::map<std::string, double>& prm) {
  PayoffFamily f;
  f.name = "tanh-additive";
  f.g = [](double x, double t) { return x * x + t * std::tanh(x); };
  f.G = [](double x, double t) { return std::exp(x * x + t * std::tanh(x)); };
  f.g_x = [](double x, double t) {
    const double s = 1.0 / std::cosh(x);
    return 2.0 * x + t * s * s;
  };
  f.g_theta = [](double x, double) { return std::tanh(x); };
  f.g_xtheta = [](double x, double) {
    const double s = 1.0 / std::cosh(x);
    return s * s;
  };
  f.x_domain = {0.0, kInf, false, true};
  f.theta_domain = {param(prm, "theta_min", 0.0), param(prm, "theta_max", kInf),
                    false, true};
  f.monotone_in_x = MonotoneInX::nondecreasing;
  f.sm_orientation = SmOrientation::increasing;
  return f;
}

PayoffFamily make_inverse_quadratic(const std::map<std::string, double>& prm) {
  PayoffFamily f;
  f.name = "inverse-quadratic";
  f.g = [](double x, double t) { return -t * t / (2.0 * (1.0 + x)); };
  f.G = [](double x, double t) {
    return std::exp(-t * t / (2.0 * (1.0 + x)));
  };
  f.g_x = [](double x, double t) {
    const double s = 1.0 + x;
    return t * t / (2.0 * s * s);
  };
  f.g_theta = [](double x, double t) { return -t / (1.0 + x); };
  f.g_xtheta = [](double x, double t) {
    const double s = 1.0 + x;
    return t / (s * s);
  };
  f.x_domain = {0.0, kInf, false, true};
  f.theta_domain = {param(prm, "theta_min", 1.0), param(prm, "theta_max", kInf),
                    false, true};
  f.monotone_in_x = MonotoneInX::nondecreasing;
  f.sm_orientation = SmOrientation::increasing;
  return f;
}

// g = h(x) + f(x) w(theta) with h(x) = x, f(x) = 1 - 1/(2(1+x)),
// w(theta) = theta - theta_min. The supremum in x is approached but never
// attained: the whole value curve comes from the tail.
PayoffFamily make_separable(const std::map<std::string, double>& prm) {
  const double t0 = param(prm, "theta_min", 0.0);
  PayoffFamily f;
  f.name = "separable";
  auto fx = [](double x) { return 1.0 - 0.5 / (1.0 + x); };
  auto dfx = [](double x) {
    const double s = 1.0 + x;
    return 0.5 / (s * s);
  };
  f.g = [fx, t0](double x, double t) { return x + fx(x) * (t - t0); };
  f.G = [fx, t0](double x, double t) {
    return std::exp(x + fx(x) * (t - t0));
  };
  f.g_x = [dfx, t0](double x, double t) { return 1.0 + dfx(x) * (t - t0); };
  f.g_theta = [fx](double x, double) { return fx(x); };
  f.g_xtheta = [dfx](double x, double) { return dfx(x); };
  f.x_domain = {0.0, kInf, false, true};
  f.theta_domain = {t0, param(prm, "theta_max", kInf), false, true};
  f.monotone_in_x = MonotoneInX::nondecreasing;
  f.sm_orientation = SmOrientation::increasing;
  return f;
}

}  // namespace

PayoffFamily builtin(const std::string& name,
                     const std::map<std::string, double>& params) {
  if (name == "linear") return make_linear(params);
  if (name == "power") return make_power(params);
  if (name == "call") return make_call(params);
  if (name == "put") return make_put(params);
  if (name == "ratio") return make_ratio(params);
  if (name == "tanh-additive") return make_tanh_additive(params);
  if (name == "inverse-quadratic") return make_inverse_quadratic(params);
  if (name == "separable") return make_separable(params);
  throw UnknownFamilyError("unknown payoff family: " + name);
}

std::vector<std::string> builtin_names() {
  return {"linear", "power",         "call",
          "put",    "ratio",         "tanh-additive",
          "inverse-quadratic",       "separable"};
}

SmReport verify_sm(const PayoffFamily& p, const LatticeSpec& spec) {
  SmReport rep;
  const double xlo = p.x_domain.lo;
  const double xhi = std::min(p.x_domain.hi, spec.x_cap);
  const double tlo = p.theta_domain.lo;
  const double thi = std::min(p.theta_domain.hi, spec.theta_cap);
  rep.degenerate_theta = !(thi > tlo);

  double mn = kInf, mx = -kInf;
  bool mult_ok = true;
  std::size_t mult_pts = 0;
  const std::size_t nx = std::max<std::size_t>(spec.nx, 2);
  const std::size_t nt = std::max<std::size_t>(spec.ntheta, 2);
  for (std::size_t i = 0; i < nx; ++i) {
    // Sample strictly inside the truncated rectangle.
    const double x = xlo + (xhi - xlo) * (static_cast<double>(i) + 0.5) /
                               static_cast<double>(nx);
    for (std::size_t j = 0; j < nt; ++j) {
      const double t = rep.degenerate_theta
                           ? tlo
                           : tlo + (thi - tlo) * (static_cast<double>(j) + 0.5) /
                                       static_cast<double>(nt);
      const double Gv = p.G(x, t);
      if (!(Gv > 0.0)) continue;
      const double c = p.g_xtheta(x, t);
      if (!is_finite(c)) continue;
      mn = std::min(mn, c);
      mx = std::max(mx, c);
      ++rep.points_checked;

      // Multiplicative single-crossing form G*G_xt > G_x*G_t, checked as an
      // independent route through finite differences of G itself. Skipped
      // where G overflows or the stencil leaves the support.
      const double h = 1e-4 * (1.0 + std::abs(x));
      const double k = 1e-4 * (1.0 + std::abs(t));
      const double Gpp = p.G(x + h, t + k), Gpm = p.G(x + h, t - k);
      const double Gmp = p.G(x - h, t + k), Gmm = p.G(x - h, t - k);
      if (Gv > 1e100 || !(Gpp > 0.0) || !(Gpm > 0.0) || !(Gmp > 0.0) ||
          !(Gmm > 0.0)) {
        continue;
      }
      const double Gxt = (Gpp - Gpm - Gmp + Gmm) / (4.0 * h * k);
      const double Gx = (Gpp + Gpm - Gmp - Gmm) / (4.0 * h);
      const double Gt = (Gpp - Gpm + Gmp - Gmm) / (4.0 * k);
      const double lhs = Gv * Gxt;
      const double rhs = Gx * Gt;
      const double slack = 1e-7 * (std::abs(lhs) + std::abs(rhs) + 1.0);
      if (!(lhs > rhs - slack)) mult_ok = false;
      ++mult_pts;
    }
  }
  rep.min_gxtheta = mn;
  rep.max_gxtheta = mx;
  rep.multiplicative_ok = mult_ok && mult_pts > 0;

  if (rep.points_checked == 0) {
    rep.orientation = SmOrientation::unknown;
    return rep;
  }
  if (mn > 0.0) {
    // Families that decrease in x run under the reverse convention even
    // though the cross-partial sign is positive: the threshold map reverses
    // direction when the search moves toward lower payoff values.
    rep.orientation = (p.monotone_in_x == MonotoneInX::nonincreasing)
                          ? SmOrientation::decreasing
                          : SmOrientation::increasing;
  } else if (mx < 0.0) {
    rep.orientation = SmOrientation::decreasing;
  } else {
    rep.orientation = SmOrientation::unknown;
  }
  return rep;
}

PayoffFamily tabulated_family(std::string name, std::vector<double> x,
                              std::vector<double> theta,
                              std::vector<std::vector<double>> G_values) {
  if (x.size() < 3 || theta.size() < 3 || G_values.size() != x.size()) {
    throw Error("tabulated_family: need a full lattice, >=3 nodes per axis");
  }
  for (const auto& row : G_values) {
    if (row.size() != theta.size()) {
      throw Error("tabulated_family: ragged lattice");
    }
  }
  auto xs = std::make_shared<std::vector<double>>(std::move(x));
  auto ts = std::make_shared<std::vector<double>>(std::move(theta));
  auto gv = std::make_shared<std::vector<std::vector<double>>>(
      std::move(G_values));

  auto locate = [](const std::vector<double>& g, double v) {
    auto it = std::upper_bound(g.begin(), g.end(), v);
    std::size_t hi = static_cast<std::size_t>(it - g.begin());
    hi = std::clamp<std::size_t>(hi, 1, g.size() - 1);
    return hi;
  };
  auto Geval = [xs, ts, gv, locate](double xq, double tq) {
    if (xq < xs->front() || xq > xs->back() || tq < ts->front() ||
        tq > ts->back()) {
      return 0.0;
    }
    const std::size_t i = locate(*xs, xq);
    const std::size_t j = locate(*ts, tq);
    const double u = (xq - (*xs)[i - 1]) / ((*xs)[i] - (*xs)[i - 1]);
    const double v = (tq - (*ts)[j - 1]) / ((*ts)[j] - (*ts)[j - 1]);
    return (1 - u) * (1 - v) * (*gv)[i - 1][j - 1] +
           u * (1 - v) * (*gv)[i][j - 1] + (1 - u) * v * (*gv)[i - 1][j] +
           u * v * (*gv)[i][j];
  };

  PayoffFamily f;
  f.name = std::move(name);
  f.G = Geval;
  f.g = [Geval](double xq, double tq) {
    const double g = Geval(xq, tq);
    return g > 0.0 ? std::log(g) : -kInf;
  };
  const double hx = ((*xs)[1] - (*xs)[0]) * 0.5;
  const double ht = ((*ts)[1] - (*ts)[0]) * 0.5;
  auto glog = f.g;
  f.g_x = [glog, hx](double xq, double tq) {
    return (glog(xq + hx, tq) - glog(xq - hx, tq)) / (2.0 * hx);
  };
  f.g_theta = [glog, ht](double xq, double tq) {
    return (glog(xq, tq + ht) - glog(xq, tq - ht)) / (2.0 * ht);
  };
  f.g_xtheta = [glog, hx, ht](double xq, double tq) {
    return (glog(xq + hx, tq + ht) - glog(xq + hx, tq - ht) -
            glog(xq - hx, tq + ht) + glog(xq - hx, tq - ht)) /
           (4.0 * hx * ht);
  };
  f.x_domain = {xs->front(), xs->back(), false, false};
  f.theta_domain = {ts->front(), ts->back(), false, false};
  f.numeric_partials = true;
  const SmReport rep = verify_sm(f, {32, 32, xs->back(), ts->back()});
  f.sm_orientation = rep.orientation;
  return f;
}

}  // namespace stopcal
