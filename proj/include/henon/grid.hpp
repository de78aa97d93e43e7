#pragma once

// Radial grids, grid functions, and the elementary grid calculus
// (interpolation, derivatives, quadrature with power-law tails).

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "henon/closed_forms.hpp"
#include "henon/errors.hpp"

namespace henon {

enum class GridScheme { uniform, geometric };

/// Strictly increasing nodes in (0, R] with r = R as the last node.
/// Uniform grids use nodes h, 2h, ..., R; geometric grids use a constant
/// ratio between r_min and R (the default r_min is 1e-6 R).
class RadialGrid {
 public:
  static RadialGrid uniform(double outer_radius, std::size_t n) {
    validate(outer_radius, n);
    std::vector<double> nodes(n);
    const double h = outer_radius / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) nodes[i] = h * static_cast<double>(i + 1);
    nodes.back() = outer_radius;
    return RadialGrid(GridScheme::uniform, std::move(nodes), h);
  }

  static RadialGrid geometric(double outer_radius, std::size_t n, std::optional<double> r_min = {}) {
    validate(outer_radius, n);
    const double inner = r_min.value_or(1e-6 * outer_radius);
    detail::require(inner > 0.0 && inner < outer_radius, "geometric grid needs 0 < r_min < R");
    const double log_step = std::log(outer_radius / inner) / static_cast<double>(n - 1);
    std::vector<double> nodes(n);
    for (std::size_t i = 0; i < n; ++i) nodes[i] = inner * std::exp(log_step * static_cast<double>(i));
    nodes.front() = inner;
    nodes.back() = outer_radius;
    return RadialGrid(GridScheme::geometric, std::move(nodes), log_step);
  }

  GridScheme scheme() const noexcept { return scheme_; }
  std::size_t size() const noexcept { return nodes_.size(); }
  double outer_radius() const noexcept { return nodes_.back(); }
  double inner_radius() const noexcept { return nodes_.front(); }
  std::span<const double> nodes() const noexcept { return nodes_; }
  double operator[](std::size_t i) const noexcept { return nodes_[i]; }

  /// Spacing in the grid's natural coordinate: r for uniform, ln r for geometric.
  double step() const noexcept { return step_; }

  /// Natural coordinate of a radius (r or ln r).
  double coordinate(double r) const { return scheme_ == GridScheme::uniform ? r : std::log(r); }

 private:
  static void validate(double outer_radius, std::size_t n) {
    detail::require(std::isfinite(outer_radius) && outer_radius > 0.0, "grid radius must be positive");
    detail::require(n >= 2, "grid needs at least two nodes");
  }

  RadialGrid(GridScheme scheme, std::vector<double> nodes, double step)
      : scheme_(scheme), nodes_(std::move(nodes)), step_(step) {}

  GridScheme scheme_;
  std::vector<double> nodes_;
  double step_;
};

/// Behaviour of a grid function beyond the outer radius.
struct TailModel {
  enum class Kind { unknown, compact, power_law };
  Kind kind = Kind::unknown;
  double exponent = 0.0;

  static TailModel unknown() { return {}; }
  static TailModel compact() { return {Kind::compact, 0.0}; }
  static TailModel power_law(double exponent) { return {Kind::power_law, exponent}; }
};

/// Values of a radial function on the nodes of a grid.
struct RadialFunction {
  RadialGrid grid;
  std::vector<double> values;
  TailModel tail{};

  RadialFunction(RadialGrid g, std::vector<double> v, TailModel t = {})
      : grid(std::move(g)), values(std::move(v)), tail(t) {
    detail::require(values.size() == grid.size(), "grid function size mismatch");
    for (double x : values)
      if (!std::isfinite(x)) throw DomainError("grid function has non-finite values");
  }

  std::size_t size() const noexcept { return values.size(); }
  double operator[](std::size_t i) const noexcept { return values[i]; }
};

template <class F>
  requires std::invocable<F&, double>
RadialFunction sample(const RadialGrid& grid, F&& f, TailModel tail = {}) {
  std::vector<double> values(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) values[i] = f(grid[i]);
  return RadialFunction(grid, std::move(values), tail);
}

inline RadialFunction sample(const RadialGrid& grid, const RadialProfile& profile) {
  const TailModel tail = profile.has_compact_support() ? TailModel::compact()
                                                       : TailModel::power_law(profile.tail_exponent());
  return sample(grid, [&](double r) { return eval_radial(profile, r); }, tail);
}

inline double max_abs(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

inline double max_abs(const RadialFunction& f) { return max_abs(f.values); }

/// Finite-difference weights for derivatives 0..order at z from nodes x
/// (Fornberg's recursion). Returns weights[d][j].
inline std::vector<std::vector<double>> fd_weights(double z, std::span<const double> x, int order) {
  const std::size_t n = x.size();
  const std::size_t m = static_cast<std::size_t>(order);
  std::vector<std::vector<double>> c(m + 1, std::vector<double>(n, 0.0));
  double c1 = 1.0;
  double c4 = x[0] - z;
  c[0][0] = 1.0;
  for (std::size_t i = 1; i < n; ++i) {
    const std::size_t mn = std::min(i, m);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = x[i] - z;
    for (std::size_t j = 0; j < i; ++j) {
      const double c3 = x[i] - x[j];
      c2 *= c3;
      if (j == i - 1) {
        for (std::size_t k = mn; k >= 1; --k)
          c[k][i] = c1 * (static_cast<double>(k) * c[k - 1][i - 1] - c5 * c[k][i - 1]) / c2;
        c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
      }
      for (std::size_t k = mn; k >= 1; --k)
        c[k][j] = (c4 * c[k][j] - static_cast<double>(k) * c[k - 1][j]) / c3;
      c[0][j] = c4 * c[0][j] / c3;
    }
    c1 = c2;
  }
  return c;
}

/// d f / d r on the nodes, fourth order in the grid's natural coordinate.
inline std::vector<double> derivative(const RadialFunction& f) {
  const auto& g = f.grid;
  const std::size_t n = g.size();
  detail::require(n >= 5, "derivative needs at least five nodes");
  std::vector<double> coord(n);
  for (std::size_t i = 0; i < n; ++i) coord[i] = g.coordinate(g[i]);
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t start = std::min(i >= 2 ? i - 2 : 0, n - 5);
    const auto w = fd_weights(coord[i], std::span<const double>(coord).subspan(start, 5), 1);
    double d = 0.0;
    for (std::size_t j = 0; j < 5; ++j) d += w[1][j] * f.values[start + j];
    out[i] = g.scheme() == GridScheme::geometric ? d / g[i] : d;
  }
  return out;
}

/// Piecewise cubic interpolation in the natural coordinate; radii below the
/// first node use the first cubic, radii beyond R are rejected.
inline double interpolate(const RadialFunction& f, double r) {
  const auto& g = f.grid;
  detail::require(r > 0.0 && r <= g.outer_radius() * (1.0 + 1e-12), "interpolation radius out of range");
  const auto nodes = g.nodes();
  const std::size_t n = nodes.size();
  if (n < 4) throw DomainError("interpolation needs at least four nodes");
  const auto it = std::upper_bound(nodes.begin(), nodes.end(), r);
  std::size_t hi = static_cast<std::size_t>(it - nodes.begin());
  std::size_t start = hi >= 2 ? hi - 2 : 0;
  start = std::min(start, n - 4);
  double coords[4];
  for (std::size_t j = 0; j < 4; ++j) coords[j] = g.coordinate(nodes[start + j]);
  const auto w = fd_weights(g.coordinate(r), coords, 0);
  double v = 0.0;
  for (std::size_t j = 0; j < 4; ++j) v += w[0][j] * f.values[start + j];
  return v;
}

/// Least-squares slope of log|f| against log r over nodes in [r_lo, r_hi].
/// The values must be nonzero and of one sign in the window.
inline double decay_fit(std::span<const double> radii, std::span<const double> values, double r_lo, double r_hi) {
  detail::require(r_lo > 0.0 && r_hi > r_lo, "decay window must satisfy 0 < r_lo < r_hi");
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  std::size_t count = 0;
  int sign = 0;
  for (std::size_t i = 0; i < radii.size(); ++i) {
    const double r = radii[i];
    if (r < r_lo || r > r_hi) continue;
    const double v = values[i];
    const int s = v > 0.0 ? 1 : (v < 0.0 ? -1 : 0);
    if (s == 0 || (sign != 0 && s != sign))
      throw DomainError("decay_fit: function vanishes or changes sign in the window");
    sign = s;
    const double x = std::log(r);
    const double y = std::log(std::abs(v));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++count;
  }
  if (count < 2) throw DomainError("decay_fit: fewer than two nodes in the window");
  const double cn = static_cast<double>(count);
  const double denom = cn * sxx - sx * sx;
  return (cn * sxy - sx * sy) / denom;
}

inline double decay_fit(const RadialFunction& f, double r_lo, double r_hi) {
  return decay_fit(f.grid.nodes(), f.values, r_lo, r_hi);
}

namespace detail {

/// Local power-law exponent of g from two positive samples, if defined.
inline std::optional<double> local_exponent(double r1, double g1, double r2, double g2) {
  if (!(g1 > 0.0) || !(g2 > 0.0)) return std::nullopt;
  return std::log(g2 / g1) / std::log(r2 / r1);
}

}  // namespace detail

/// Integral over (0, R) of the sampled integrand g. Trapezoid rule in the
/// natural coordinate (spectrally accurate in ln r for geometric grids); the
/// segment (0, r_1) is added assuming a local power law.
inline double integrate_on_grid(const RadialGrid& grid, std::span<const double> g) {
  detail::require(g.size() == grid.size(), "integrand size mismatch");
  const std::size_t n = grid.size();
  double sum = 0.0;
  if (grid.scheme() == GridScheme::geometric) {
    for (std::size_t i = 0; i + 1 < n; ++i) sum += 0.5 * (g[i] * grid[i] + g[i + 1] * grid[i + 1]);
    sum *= grid.step();
  } else {
    for (std::size_t i = 0; i + 1 < n; ++i) sum += 0.5 * (g[i] + g[i + 1]) * (grid[i + 1] - grid[i]);
  }
  const auto w = detail::local_exponent(grid[0], g[0], grid[1], g[1]);
  if (w && *w > -1.0)
    sum += g[0] * grid[0] / (*w + 1.0);
  else
    sum += g[0] * grid[0];
  return sum;
}

/// Integral over (R, inf) of an integrand behaving like g(R) (r/R)^w.
inline double power_law_tail(double outer_radius, double g_outer, double w) {
  if (g_outer == 0.0) return 0.0;
  if (!(w < -1.0)) throw QuadratureError("divergent power-law tail (exponent >= -1)");
  return -g_outer * outer_radius / (w + 1.0);
}

/// Fits the decay exponent of g over the outer decade of the grid.
inline double outer_exponent(const RadialGrid& grid, std::span<const double> g) {
  const double r_hi = grid.outer_radius();
  const double r_lo = std::max(grid[0], r_hi / 10.0);
  return decay_fit(grid.nodes(), g, r_lo, r_hi);
}

}  // namespace henon
