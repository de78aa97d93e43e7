#pragma once

// Adaptive quadrature of radial integrands over (a, b) with 0 <= a < b <= inf.
// The integral is taken in t = ln r, split into unit panels, each integrated
// with adaptive Gauss-Kronrod. Toward r = 0 and r = inf panels are added until
// their contribution drops below the requested tolerance.

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>

#include "henon/errors.hpp"

namespace henon {

struct QuadratureOptions {
  double rel_tol = 1e-12;
  unsigned max_depth = 15;
  double panel_width = 1.0;
  /// Marching stops after this many panels in t toward 0 or infinity.
  int max_panels = 700;
};

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
};

namespace detail {

inline QuadratureResult gk_panel(const std::function<double(double)>& g_of_t, double t0, double t1,
                                 const QuadratureOptions& opts) {
  double err = 0.0;
  double l1 = 0.0;
  const double v = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(g_of_t, t0, t1, opts.max_depth,
                                                                                 opts.rel_tol, &err, &l1);
  if (!std::isfinite(v) || !std::isfinite(err)) throw QuadratureError("quadrature produced a non-finite value");
  return {v, err};
}

}  // namespace detail

/// Integral of g(r) dr over (a, b). a may be 0 and b may be +inf.
inline QuadratureResult integrate_radial(const std::function<double(double)>& g, double a, double b,
                                         const QuadratureOptions& opts = {}) {
  detail::require(a >= 0.0 && b > a, "integration limits must satisfy 0 <= a < b");
  // Integrand in t = ln r with the Jacobian e^t.
  const std::function<double(double)> h = [&g](double t) {
    const double r = std::exp(t);
    const double v = g(r) * r;
    if (!std::isfinite(v)) throw QuadratureError("integrand is not finite at r = " + std::to_string(r));
    return v;
  };

  QuadratureResult total;
  auto add = [&total](const QuadratureResult& piece) {
    total.value += piece.value;
    total.error += piece.error;
  };

  const bool left_open = a == 0.0;
  const bool right_open = std::isinf(b);
  const double t_lo = left_open ? 0.0 : std::log(a);
  const double t_hi = right_open ? 0.0 : std::log(b);

  // Finite core.
  double core_lo, core_hi;
  if (left_open && right_open) {
    core_lo = -opts.panel_width;
    core_hi = opts.panel_width;
  } else if (left_open) {
    core_lo = t_hi - opts.panel_width;
    core_hi = t_hi;
  } else if (right_open) {
    core_lo = t_lo;
    core_hi = t_lo + opts.panel_width;
  } else {
    core_lo = t_lo;
    core_hi = t_hi;
  }
  {
    const int panels = std::max(1, static_cast<int>(std::ceil((core_hi - core_lo) / opts.panel_width)));
    const double w = (core_hi - core_lo) / panels;
    for (int i = 0; i < panels; ++i) add(detail::gk_panel(h, core_lo + i * w, core_lo + (i + 1) * w, opts));
  }

  auto march = [&](double start, double direction) {
    double t = start;
    int quiet = 0;
    for (int i = 0; i < opts.max_panels; ++i) {
      const double t_next = t + direction * opts.panel_width;
      const auto piece = direction > 0 ? detail::gk_panel(h, t, t_next, opts) : detail::gk_panel(h, t_next, t, opts);
      add(piece);
      t = t_next;
      const double scale = std::max(std::abs(total.value), std::numeric_limits<double>::min());
      quiet = std::abs(piece.value) <= 1e-3 * opts.rel_tol * scale ? quiet + 1 : 0;
      if (quiet >= 3) return;
    }
    throw QuadratureError("improper integral does not converge (slowly decaying integrand)");
  };
  if (left_open) march(core_lo, -1.0);
  if (right_open) march(core_hi, 1.0);

  const double scale = std::abs(total.value);
  if (total.error > std::max(1e3 * opts.rel_tol * scale, 1e-300))
    throw QuadratureError("quadrature did not reach the requested tolerance");
  return total;
}

}  // namespace henon
