#pragma once

// Residual operators and norms on radial and bi-radial grid functions.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "henon/closed_forms.hpp"
#include "henon/errors.hpp"
#include "henon/grid.hpp"
#include "henon/params.hpp"

namespace henon {

/// Right-hand side coef * r^weight * (u + shift)^exponent of -Lap u = f(r, u).
struct NonlinearTerm {
  double coefficient;
  double weight_exponent;
  double exponent;
  double shift = 0.0;

  /// C(alpha) r^alpha u^{p_alpha}, the critical problem on R^N.
  static NonlinearTerm critical(const ProblemParams& p) {
    return {p.c_alpha(), p.alpha(), p.p_alpha(), 0.0};
  }
  /// C(alpha) r^alpha (u + gamma)^{p_alpha}, satisfied by u_eps on B_{1/eps}.
  static NonlinearTerm shifted_critical(const ProblemParams& p, double eps) {
    return {p.c_alpha(), p.alpha(), p.p_alpha(), detail::bubble_value(p, 1.0 / eps)};
  }
  /// r^alpha u^p on the unit ball.
  static NonlinearTerm unit_ball(const ProblemParams& p, double exponent) { return {1.0, p.alpha(), exponent, 0.0}; }

  double operator()(double r, double u) const {
    const double base = u + shift;
    const double power = base == 0.0 ? 0.0 : std::copysign(std::pow(std::abs(base), exponent), base);
    return coefficient * std::pow(r, weight_exponent) * power;
  }
};

struct ResidualReport {
  std::vector<double> residual;
  double max_abs = 0.0;
  /// Grid step in the natural coordinate (ln r for geometric grids).
  double h = 0.0;
  /// Observed constant K = max_abs / h^2.
  double k_constant = 0.0;
};

/// -u'' - (N-1)/r u' - f(r, u) on every node: three-point centred differences
/// inside, four-point one-sided differences at the two ends.
inline ResidualReport residual_radial(const RadialFunction& f, int dim, const NonlinearTerm& term) {
  const auto& g = f.grid;
  const std::size_t n = g.size();
  detail::require(n >= 5, "residual needs at least five nodes");
  detail::require(dim >= 1, "dimension must be positive");
  const bool geometric = g.scheme() == GridScheme::geometric;
  std::vector<double> coord(n);
  for (std::size_t i = 0; i < n; ++i) coord[i] = g.coordinate(g[i]);

  ResidualReport report;
  report.residual.resize(n);
  report.h = g.step();
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t start, width;
    if (i == 0) {
      start = 0;
      width = 4;
    } else if (i + 1 == n) {
      start = n - 4;
      width = 4;
    } else {
      start = i - 1;
      width = 3;
    }
    const auto w = fd_weights(coord[i], std::span<const double>(coord).subspan(start, width), 2);
    double d1 = 0.0, d2 = 0.0;
    for (std::size_t j = 0; j < width; ++j) {
      d1 += w[1][j] * f.values[start + j];
      d2 += w[2][j] * f.values[start + j];
    }
    const double r = g[i];
    double lap;
    if (geometric)  // u'' + (N-1)/r u' = (u_tt + (N-2) u_t) / r^2 with t = ln r
      lap = (d2 + (dim - 2.0) * d1) / (r * r);
    else
      lap = d2 + (dim - 1.0) / r * d1;
    const double res = -lap - term(r, f.values[i]);
    report.residual[i] = res;
    report.max_abs = std::max(report.max_abs, std::abs(res));
  }
  report.k_constant = report.max_abs / (report.h * report.h);
  return report;
}

inline ResidualReport residual_radial(const RadialFunction& f, const ProblemParams& p) {
  return residual_radial(f, p.dim(), NonlinearTerm::critical(p));
}

/// Uniform grid on [0, extent]^2 with spacing h used for bi-radial residuals.
struct BiRadialGrid {
  double h;
  double extent;

  std::size_t points() const { return static_cast<std::size_t>(std::llround(extent / h)) + 1; }
};

struct BiRadialResidual {
  double max_abs = 0.0;
  BiRadialPoint argmax{0.0, 0.0};
  double h = 0.0;
};

/// Residual of -Lap u - C(2)|x|^2 u^{p_2} for u(s, t), s = |x'|, t = |x''|, with
/// Lap u = u_ss + m/s u_s + u_tt + m/t u_t and m = N/2 - 1. Nodes on the axes
/// use the even extension, where m/s u_s becomes m u_ss. The outer boundary
/// row and column are excluded.
inline BiRadialResidual residual_biradial(const std::function<double(double, double)>& u, const ProblemParams& p,
                                          const BiRadialGrid& grid) {
  detail::require(std::abs(p.alpha() - 2.0) <= kEvenAlphaTolerance, "bi-radial residual needs alpha = 2");
  detail::require(p.dim() >= 4 && p.dim() % 2 == 0, "bi-radial residual needs even N >= 4");
  detail::require(grid.h > 0.0 && grid.extent > 2.0 * grid.h, "bi-radial grid needs 0 < 2h < extent");
  const std::size_t n = grid.points();
  const double h = grid.h;
  std::vector<double> vals(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) vals[i * n + j] = u(h * static_cast<double>(i), h * static_cast<double>(j));
  auto at = [&](std::size_t i, std::size_t j) { return vals[i * n + j]; };

  const double m = p.dim() / 2.0 - 1.0;
  const double c = p.c_alpha();
  const double pe = p.p_alpha();
  BiRadialResidual out;
  out.h = h;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    for (std::size_t j = 0; j + 1 < n; ++j) {
      const double s = h * static_cast<double>(i);
      const double t = h * static_cast<double>(j);
      const double uc = at(i, j);
      const double us_minus = i == 0 ? at(1, j) : at(i - 1, j);
      const double ut_minus = j == 0 ? at(i, 1) : at(i, j - 1);
      const double uss = (at(i + 1, j) - 2.0 * uc + us_minus) / (h * h);
      const double utt = (at(i, j + 1) - 2.0 * uc + ut_minus) / (h * h);
      const double s_part = i == 0 ? (1.0 + m) * uss : uss + m / s * (at(i + 1, j) - us_minus) / (2.0 * h);
      const double t_part = j == 0 ? (1.0 + m) * utt : utt + m / t * (at(i, j + 1) - ut_minus) / (2.0 * h);
      const double res = -(s_part + t_part) - c * (s * s + t * t) * std::pow(uc, pe);
      if (std::abs(res) > out.max_abs) {
        out.max_abs = std::abs(res);
        out.argmax = {s, t};
      }
    }
  }
  return out;
}

/// The standing decay band (N/(N+2))(N-2) < beta < N-2.
inline bool beta_in_standard_band(int dim, double beta) {
  const double n = dim;
  return beta > n / (n + 2.0) * (n - 2.0) && beta < n - 2.0;
}

struct WeightedNormResult {
  double value = 0.0;
  bool in_standard_band = false;
  /// The power-law tail makes the weighted product unbounded (beta + w > 0).
  bool unbounded_tail = false;
};

/// sup (1+r)^beta |f(r)| over the grid, extended beyond R with the tail model.
/// Outside the standard beta band the value is still computed and the flag
/// records the violation.
inline WeightedNormResult weighted_sup_norm(const RadialFunction& f, double beta, int dim) {
  WeightedNormResult out;
  out.in_standard_band = beta_in_standard_band(dim, beta);
  const auto& g = f.grid;
  for (std::size_t i = 0; i < g.size(); ++i)
    out.value = std::max(out.value, std::pow(1.0 + g[i], beta) * std::abs(f.values[i]));
  if (f.tail.kind == TailModel::Kind::power_law) {
    const double w = f.tail.exponent;
    const double edge = std::abs(f.values.back());
    if (edge > 0.0) {
      if (beta + w > 0.0) {
        out.value = std::numeric_limits<double>::infinity();
        out.unbounded_tail = true;
      } else if (w >= 0.0) {
        throw DomainError("weighted_sup_norm: nondecaying power-law tail");
      }
      // For beta + w <= 0 and w < 0 the product (1+r)^beta r^w decreases
      // beyond R, so the edge value bounds the tail.
    }
  }
  return out;
}

/// (N omega_N int f'(r)^2 r^{N-1} dr)^{1/2} over (0, inf): grid quadrature
/// plus a power-law tail beyond R. The tail exponent comes from the tail model,
/// or a fit over the outer decade when the tail is unknown.
inline double dirichlet_seminorm(const RadialFunction& f, int dim) {
  const auto& g = f.grid;
  if (max_abs(f) == 0.0) return 0.0;
  const auto d = derivative(f);
  std::vector<double> integrand(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) integrand[i] = d[i] * d[i] * std::pow(g[i], dim - 1.0);
  double total = integrate_on_grid(g, integrand);
  if (f.tail.kind != TailModel::Kind::compact && integrand.back() > 0.0) {
    double w;
    if (f.tail.kind == TailModel::Kind::power_law)
      w = 2.0 * (f.tail.exponent - 1.0) + dim - 1.0;
    else
      w = outer_exponent(g, integrand);
    total += power_law_tail(g.outer_radius(), integrand.back(), w);
  }
  return std::sqrt(sphere_area(dim) * total);
}

}  // namespace henon
