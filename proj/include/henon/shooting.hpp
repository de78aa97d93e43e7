#pragma once

// Radial Dirichlet problem -Lap u = |x|^alpha u^p on the unit ball, solved in
// s = r^{(2+alpha)/2}, where it becomes
//   -v'' - (M-1)/s v' = c v^p,  c = 4/(2+alpha)^2,  v'(0) = 0,
// by shooting from v(0) = d.

#include <boost/math/tools/roots.hpp>
#include <boost/numeric/odeint.hpp>

#include <array>
#include <cmath>
#include <cstdint>
#include <utility>
#include <vector>

#include "henon/errors.hpp"
#include "henon/grid.hpp"
#include "henon/params.hpp"
#include "henon/radial_numerics.hpp"

namespace henon {

struct ShootingOptions {
  double s0 = 1e-6;
  double s_max = 1e6;
  double abs_tol = 1e-13;
  double rel_tol = 1e-12;
  std::size_t profile_nodes = 400;
};

struct ShootingResult {
  ProblemParams params;
  double p;
  double d;
  double zero_radius;
  /// v on a uniform s-grid of (0, zero_radius].
  RadialFunction profile;
};

namespace detail {

using OdeState = std::array<double, 2>;

struct LaneEmdenRhs {
  double m;  // fictitious dimension
  double c;  // 4/(2+alpha)^2
  double p;
  void operator()(const OdeState& y, OdeState& dy, double s) const {
    const double v = y[0];
    const double vp = std::copysign(std::pow(std::abs(v), p), v);
    dy[0] = y[1];
    dy[1] = -(m - 1.0) / s * y[1] - c * vp;
  }
};

inline void validate_bvp(const ProblemParams& params, double p, double d) {
  require(p > 1.0 && p < params.p_alpha(), "shooting needs 1 < p < p_alpha");
  require(d > 0.0 && std::isfinite(d), "initial height d must be positive");
}

/// Two-term series at the regular singular point s = 0.
inline OdeState series_start(double m, double c, double p, double d, double s0) {
  const double dp = std::pow(d, p);
  return {d - c * dp * s0 * s0 / (2.0 * m), -c * dp * s0 / m};
}

inline auto make_stepper(const ShootingOptions& o) {
  using namespace boost::numeric::odeint;
  return make_dense_output(o.abs_tol, o.rel_tol, runge_kutta_dopri5<OdeState>());
}

}  // namespace detail

/// First zero of the shooting solution with v(0) = d.
inline double shooting_zero(const ProblemParams& params, double p, double d, const ShootingOptions& o = {}) {
  detail::validate_bvp(params, p, d);
  const double m = params.fictitious_dim();
  const double q = 2.0 + params.alpha();
  const detail::LaneEmdenRhs rhs{m, 4.0 / (q * q), p};
  auto stepper = detail::make_stepper(o);
  stepper.initialize(detail::series_start(m, rhs.c, p, d, o.s0), o.s0, 1e-3 * o.s0);
  for (std::uint64_t steps = 0; steps < 10'000'000; ++steps) {
    const auto span = stepper.do_step(rhs);
    if (stepper.current_state()[0] <= 0.0) {
      auto v_at = [&](double s) {
        detail::OdeState y;
        stepper.calc_state(s, y);
        return y[0];
      };
      boost::uintmax_t iters = 200;
      const auto root = boost::math::tools::toms748_solve(
          v_at, span.first, span.second, v_at(span.first), stepper.current_state()[0],
          boost::math::tools::eps_tolerance<double>(50), iters);
      return 0.5 * (root.first + root.second);
    }
    if (stepper.current_time() > o.s_max) break;
  }
  throw NoZeroCrossingError("shooting solution stays positive up to s_max");
}

/// v(s) at increasing s (all >= s0) for the shooting solution with v(0) = d.
inline std::vector<double> shooting_values(const ProblemParams& params, double p, double d,
                                           const std::vector<double>& s_points, const ShootingOptions& o = {}) {
  detail::validate_bvp(params, p, d);
  const double m = params.fictitious_dim();
  const double q = 2.0 + params.alpha();
  const detail::LaneEmdenRhs rhs{m, 4.0 / (q * q), p};
  std::vector<double> out;
  out.reserve(s_points.size());
  std::vector<double> times;
  times.reserve(s_points.size() + 1);
  times.push_back(o.s0);
  for (double s : s_points) {
    detail::require(s >= o.s0, "shooting output points must be >= s0");
    detail::require(s >= times.back(), "shooting output points must be increasing");
    times.push_back(s);
  }
  auto y = detail::series_start(m, rhs.c, p, d, o.s0);
  bool first = true;
  boost::numeric::odeint::integrate_times(detail::make_stepper(o), rhs, y, times.begin(), times.end(), 1e-3 * o.s0,
                                          [&](const detail::OdeState& st, double) {
                                            if (first) {
                                              first = false;
                                              return;
                                            }
                                            out.push_back(st[0]);
                                          });
  return out;
}

inline ShootingResult shoot_bvp(const ProblemParams& params, double p, double d, const ShootingOptions& o = {}) {
  const double zero = shooting_zero(params, p, d, o);
  auto grid = RadialGrid::uniform(zero, o.profile_nodes);
  std::vector<double> s(grid.nodes().begin(), grid.nodes().end());
  auto v = shooting_values(params, p, d, s, o);
  v.back() = 0.0;
  return {params, p, d, zero, RadialFunction(std::move(grid), std::move(v), TailModel::compact())};
}

struct UnitBallSolution {
  double d_scaling = 0.0;  // from zero_radius(1) and the scaling law
  double d_direct = 0.0;   // from a root of zero_radius(d) = 1
  double zero_radius_at_one = 0.0;
  double relative_gap = 0.0;
};

/// d* with zero_radius(d*) = 1, once from the scaling law
/// zero_radius(d) = zero_radius(1) d^{-(p-1)/2} and once by direct root finding.
inline UnitBallSolution solve_unit_ball(const ProblemParams& params, double p, const ShootingOptions& o = {}) {
  UnitBallSolution sol;
  sol.zero_radius_at_one = shooting_zero(params, p, 1.0, o);
  sol.d_scaling = std::pow(sol.zero_radius_at_one, 2.0 / (p - 1.0));
  auto g = [&](double log_d) { return std::log(shooting_zero(params, p, std::exp(log_d), o)); };
  double lo = std::log(sol.d_scaling) - 1.0, hi = std::log(sol.d_scaling) + 1.0;
  // zero_radius decreases in d.
  for (int i = 0; i < 60 && g(lo) <= 0.0; ++i) lo -= 1.0;
  for (int i = 0; i < 60 && g(hi) >= 0.0; ++i) hi += 1.0;
  boost::uintmax_t iters = 200;
  const auto root = boost::math::tools::toms748_solve(g, lo, hi, boost::math::tools::eps_tolerance<double>(45), iters);
  sol.d_direct = std::exp(0.5 * (root.first + root.second));
  sol.relative_gap = std::abs(sol.d_direct - sol.d_scaling) / sol.d_direct;
  return sol;
}

/// u(r) = v(r^{(2+alpha)/2}) on the nodes of an r-grid of (0, 1].
inline RadialFunction unit_ball_profile(const ProblemParams& params, double p, double d, const RadialGrid& r_grid,
                                        const ShootingOptions& o = {}) {
  std::vector<double> s(r_grid.size());
  for (std::size_t i = 0; i < s.size(); ++i) s[i] = std::pow(r_grid[i], (2.0 + params.alpha()) / 2.0);
  auto v = shooting_values(params, p, d, s, o);
  return RadialFunction(r_grid, std::move(v), TailModel::compact());
}

/// Residual of the composed profile against -u'' - (N-1)/r u' = r^alpha u^p.
inline ResidualReport composed_residual(const ProblemParams& params, double p, double d, const RadialGrid& r_grid,
                                        const ShootingOptions& o = {}) {
  return residual_radial(unit_ball_profile(params, p, d, r_grid, o), params.dim(),
                         NonlinearTerm::unit_ball(params, p));
}

}  // namespace henon
