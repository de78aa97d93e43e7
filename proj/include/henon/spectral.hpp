#pragma once

// Truncated singular Sturm-Liouville problems on (0, R) with z(R) = 0:
//   lambda_form       -(r^{N-1} psi')' + mu_k r^{N-3} psi = Lambda V(r) r^{N-1} psi
//   weighted_form     -(r^{N-1} z')' - V(r) r^{N-1} z     = Lambda r^{N-3} z
//   transformed_form  -(s^{M-1} eta')' - Lambda M(M+2) s^{M-1} eta/(1+s^2)^2 = -beta s^{M-3} eta
// with V(r) = p_alpha C(alpha) r^alpha / (1+r^{2+alpha})^2. Each is discretised by
// a conservative box scheme (faces at cell midpoints in the natural grid
// coordinate), giving a tridiagonal-diagonal pencil.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "henon/closed_forms.hpp"
#include "henon/errors.hpp"
#include "henon/grid.hpp"
#include "henon/params.hpp"
#include "henon/tridiagonal.hpp"

namespace henon {

enum class SpectralForm { lambda_form, weighted_form, transformed_form };

inline std::string to_string(SpectralForm f) {
  switch (f) {
    case SpectralForm::lambda_form: return "lambda_form";
    case SpectralForm::weighted_form: return "weighted_form";
    case SpectralForm::transformed_form: return "transformed_form";
  }
  return "unknown";
}

inline constexpr std::size_t kDefaultNodes = 8000;
inline constexpr std::size_t kMinSpectralNodes = 200;
inline constexpr std::size_t kMinNodesPerLobe = 10;

enum class OriginCondition { zero_flux, dirichlet };

struct SpectralProblem {
  ProblemParams params;
  SpectralForm form;
  int k = 0;
  double lambda_fixed = 1.0;
  RadialGrid grid;

  static SpectralProblem lambda(const ProblemParams& p, int k, double radius, std::size_t nodes = kDefaultNodes) {
    detail::require(k >= 0, "mode index k must be >= 0");
    return {p, SpectralForm::lambda_form, k, 1.0, make_grid(radius, nodes)};
  }
  static SpectralProblem weighted(const ProblemParams& p, double radius, std::size_t nodes = kDefaultNodes) {
    return {p, SpectralForm::weighted_form, 0, 1.0, make_grid(radius, nodes)};
  }
  /// The transformed problem lives on (0, S) in the variable s = r^{(2+alpha)/2}.
  static SpectralProblem transformed(const ProblemParams& p, double lambda_fixed, double s_radius,
                                     std::size_t nodes = kDefaultNodes) {
    detail::require(std::isfinite(lambda_fixed), "fixed Lambda must be finite");
    return {p, SpectralForm::transformed_form, 0, lambda_fixed, make_grid(s_radius, nodes)};
  }

  double radius() const { return grid.outer_radius(); }

  /// Regularity for k = 0 and the weighted/transformed forms, psi(0) = 0 for k >= 1.
  OriginCondition origin_condition() const {
    return form == SpectralForm::lambda_form && k >= 1 ? OriginCondition::dirichlet : OriginCondition::zero_flux;
  }

  /// Effective dimension of the radial operator (N, or M for the transformed form).
  double operator_dim() const {
    return form == SpectralForm::transformed_form ? params.fictitious_dim() : static_cast<double>(params.dim());
  }

 private:
  static RadialGrid make_grid(double radius, std::size_t nodes) {
    detail::require(std::isfinite(radius) && radius > 0.0, "truncation radius must be positive");
    detail::require(nodes >= kMinSpectralNodes, "spectral grids need at least 200 nodes");
    // The modes live on the unit scale, so the inner radius must not grow with R.
    return RadialGrid::geometric(radius, nodes, std::min(1e-6 * radius, 1e-4));
  }
};

/// V(r) = p_alpha C(alpha) r^alpha / (1+r^{2+alpha})^2.
inline double linearised_potential(const ProblemParams& p, double r) {
  const double q = 2.0 + p.alpha();
  return p.potential_amplitude() * std::pow(r, p.alpha()) * detail::inverse_power_of_one_plus(r, q, 2.0);
}

/// d V / d alpha at fixed N.
inline double linearised_potential_dalpha(const ProblemParams& p, double r) {
  const double n = p.dim();
  const double a = p.alpha();
  const double q = 2.0 + a;
  const double lr = std::log(r);
  const double frac = 1.0 / (1.0 + std::exp(-q * lr));  // r^q / (1 + r^q)
  const double dlog = 2.0 / (n + 2.0 + 2.0 * a) + 1.0 / (n + a) + lr - 2.0 * frac * lr;
  return linearised_potential(p, r) * dlog;
}

namespace detail {

struct BoxScheme {
  std::vector<double> nodes;  // unknowns: all grid nodes except r = R
  std::vector<double> width;  // cell widths between faces
  std::vector<double> face;   // face radii; face[i] between node i and i+1 (face[m-1] between last unknown and R)
  double lower_face;          // face below the first node
};

inline BoxScheme box_scheme(const RadialGrid& grid) {
  const std::size_t n = grid.size();
  const std::size_t m = n - 1;
  BoxScheme b;
  b.nodes.assign(grid.nodes().begin(), grid.nodes().end() - 1);
  b.face.resize(m);
  const bool geo = grid.scheme() == GridScheme::geometric;
  for (std::size_t i = 0; i < m; ++i)
    b.face[i] = geo ? std::sqrt(grid[i] * grid[i + 1]) : 0.5 * (grid[i] + grid[i + 1]);
  b.lower_face = geo ? grid[0] * grid[0] / b.face[0] : std::max(0.0, grid[0] - (b.face[0] - grid[0]));
  b.width.resize(m);
  for (std::size_t i = 0; i < m; ++i) b.width[i] = b.face[i] - (i == 0 ? b.lower_face : b.face[i - 1]);
  return b;
}

}  // namespace detail

/// Builds the discrete pencil of a problem. The eigenvalue of the pencil is
/// Lambda for lambda/weighted forms and -beta for the transformed form.
inline TridiagonalPencil build_pencil(const SpectralProblem& prob) {
  const auto& grid = prob.grid;
  const auto b = detail::box_scheme(grid);
  const std::size_t m = b.nodes.size();
  const double dim = prob.operator_dim();
  TridiagonalPencil pen;
  pen.diag.assign(m, 0.0);
  pen.off.assign(m - 1, 0.0);
  pen.mass.assign(m, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    const double coef = std::pow(b.face[i], dim - 1.0) / (grid[i + 1] - grid[i]);
    pen.diag[i] += coef;
    if (i + 1 < m) {
      pen.diag[i + 1] += coef;
      pen.off[i] = -coef;
    }
  }
  const ProblemParams& p = prob.params;
  for (std::size_t i = 0; i < m; ++i) {
    const double r = b.nodes[i];
    const double w = b.width[i];
    switch (prob.form) {
      case SpectralForm::lambda_form:
        pen.diag[i] += mu(p, prob.k) * std::pow(r, dim - 3.0) * w;
        pen.mass[i] = linearised_potential(p, r) * std::pow(r, dim - 1.0) * w;
        break;
      case SpectralForm::weighted_form:
        pen.diag[i] -= linearised_potential(p, r) * std::pow(r, dim - 1.0) * w;
        pen.mass[i] = std::pow(r, dim - 3.0) * w;
        break;
      case SpectralForm::transformed_form: {
        const double mm = dim;
        pen.diag[i] -= prob.lambda_fixed * mm * (mm + 2.0) * std::pow(r, mm - 1.0) / ((1.0 + r * r) * (1.0 + r * r)) * w;
        pen.mass[i] = std::pow(r, mm - 3.0) * w;
        break;
      }
    }
  }
  if (prob.origin_condition() == OriginCondition::dirichlet)
    pen.diag[0] += std::pow(b.lower_face, dim - 1.0) / b.nodes[0];
  pen.validate();
  return pen;
}

struct EigenPair {
  int index = 1;  // 1 = first
  double value = 0.0;
  RadialFunction eigenfunction;
  int sign_changes = 0;
  double pencil_residual = 0.0;
};

/// Sign changes of a sampled function, ignoring values below rel_floor * max.
inline int count_sign_changes(std::span<const double> v, double rel_floor = 1e-10) {
  const double floor = rel_floor * max_abs(v);
  int changes = 0;
  int last = 0;
  for (double x : v) {
    if (std::abs(x) <= floor) continue;
    const int s = x > 0.0 ? 1 : -1;
    if (last != 0 && s != last) ++changes;
    last = s;
  }
  return changes;
}

namespace detail {

/// Max-norm 1 and first extremum positive.
inline void normalise_eigenvector(std::vector<double>& x) {
  const double m = max_abs(x);
  for (double& e : x) e /= m;
  for (double e : x) {
    if (std::abs(e) > 1e-6) {
      if (e < 0.0)
        for (double& f : x) f = -f;
      break;
    }
  }
}

/// Node near r = min(1, R/2) with the largest |x| among its 20 predecessors,
/// used to join the origin recurrence to the inverse-iteration vector.
inline std::size_t match_index(const RadialGrid& grid, const std::vector<double>& x) {
  const double target = std::min(1.0, 0.5 * grid.outer_radius());
  const auto nodes = grid.nodes();
  std::size_t i = static_cast<std::size_t>(std::lower_bound(nodes.begin(), nodes.end(), target) - nodes.begin());
  i = std::min(i, x.size() - 1);
  std::size_t best = i;
  for (std::size_t j = i >= 20 ? i - 20 : 0; j <= i; ++j)
    if (std::abs(x[j]) > std::abs(x[best])) best = j;
  return best;
}

/// Smallest number of nodes in any lobe between sign changes.
inline std::size_t min_nodes_per_lobe(const std::vector<double>& v) {
  const double floor = 1e-10 * max_abs(v);
  std::size_t best = v.size();
  std::size_t run = 0;
  int last = 0;
  for (double x : v) {
    if (std::abs(x) <= floor) {
      ++run;
      continue;
    }
    const int s = x > 0.0 ? 1 : -1;
    if (last != 0 && s != last) {
      best = std::min(best, run);
      run = 0;
    }
    last = s;
    ++run;
  }
  return std::min(best, run);
}

}  // namespace detail

struct SolveOptions {
  double abs_tol = 1e-10;
  bool eigenfunctions = true;
};

/// The h_max lowest eigenvalues of the pencil with eigenfunctions (for the
/// transformed form the largest beta come first and values are beta).
inline std::vector<EigenPair> solve_eigen(const SpectralProblem& prob, int h_max, const SolveOptions& opts = {}) {
  detail::require(h_max >= 1, "h_max must be >= 1");
  detail::require(prob.grid.size() >= kMinSpectralNodes, "spectral grids need at least 200 nodes");
  const auto pen = build_pencil(prob);
  detail::require(static_cast<std::size_t>(h_max) <= pen.size(), "h_max exceeds the number of unknowns");
  std::vector<EigenPair> out;
  const bool flip = prob.form == SpectralForm::transformed_form;
  for (int h = 1; h <= h_max; ++h) {
    const double sigma = pencil_eigenvalue(pen, static_cast<std::size_t>(h), {opts.abs_tol});
    std::vector<double> full(prob.grid.size(), 0.0);
    double res = 0.0;
    int changes = h - 1;
    if (opts.eigenfunctions) {
      auto x = pencil_eigenvector(pen, sigma);
      refine_leading_components(pen, sigma, x, detail::match_index(prob.grid, x));
      res = pencil_residual(pen, sigma, x);
      detail::normalise_eigenvector(x);
      std::copy(x.begin(), x.end(), full.begin());
      changes = count_sign_changes(x);
      if (detail::min_nodes_per_lobe(x) < kMinNodesPerLobe)
        throw GridTooCoarseError("fewer than 10 nodes per oscillation of eigenfunction " + std::to_string(h));
    }
    out.push_back({h, flip ? -sigma : sigma, RadialFunction(prob.grid, std::move(full), TailModel::compact()),
                   changes, res});
  }
  for (std::size_t i = 1; i < out.size(); ++i)
    if (!(flip ? out[i].value < out[i - 1].value : out[i].value > out[i - 1].value))
      throw ConvergenceError("eigenvalues are not strictly ordered");
  return out;
}

inline double first_eigenvalue(const SpectralProblem& prob, double abs_tol = 1e-10) {
  const auto pen = build_pencil(prob);
  return pencil_eigenvalue(pen, 1, {abs_tol});
}

struct SignCheck {
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  bool first_negative = false;
  bool second_positive = false;
  bool holds() const { return first_negative && second_positive; }
};

/// Lambda_1 < 0 < Lambda_2 for the weighted problem on (0, 1/eps).
inline SignCheck first_eigen_sign_check(const ProblemParams& p, double eps, std::size_t nodes = kDefaultNodes) {
  detail::require(eps > 0.0 && eps < 1.0, "sign check needs 0 < eps < 1");
  const auto prob = SpectralProblem::weighted(p, 1.0 / eps, nodes);
  const auto pen = build_pencil(prob);
  SignCheck c;
  c.lambda1 = pencil_eigenvalue(pen, 1);
  c.lambda2 = pencil_eigenvalue(pen, 2);
  c.first_negative = c.lambda1 < 0.0;
  c.second_positive = c.lambda2 > 0.0;
  return c;
}

/// Transformed problem in s = r^{(2+alpha)/2} for the fixed Lambda, on (0, s_radius).
inline std::vector<EigenPair> solve_transformed(const ProblemParams& p, double lambda_fixed, double s_radius,
                                                int h_max = 2, std::size_t nodes = kDefaultNodes) {
  detail::require(s_radius > 1.0, "transformed problem needs R > 1");
  return solve_eigen(SpectralProblem::transformed(p, lambda_fixed, s_radius, nodes), h_max);
}

/// beta slot 4 mu_k / (2+alpha)^2 occupied by mode k in the transformed problem.
inline double transformed_beta(const ProblemParams& p, int k) {
  const double q = 2.0 + p.alpha();
  return 4.0 * mu(p, k) / (q * q);
}

/// The closed forms at Lambda = 1: eta_1 = s/(1+s^2)^{M/2}, eta_2 = (1-s^2)/(1+s^2)^{M/2}.
inline double eta_closed(const ProblemParams& p, int h, double s) {
  const double m = p.fictitious_dim();
  const double base = std::pow(1.0 + s * s, -m / 2.0);
  if (h == 1) return s * base;
  if (h == 2) return (1.0 - s * s) * base;
  throw DomainError("closed-form eta available for h = 1, 2");
}

/// Evaluates eta(r^{(2+alpha)/2}) at radius r, the pullback of a transformed eigenfunction.
inline double pullback(const RadialFunction& eta, const ProblemParams& p, double r) {
  const double s = std::pow(r, (2.0 + p.alpha()) / 2.0);
  if (s > eta.grid.outer_radius()) return 0.0;
  if (s < eta.grid.inner_radius()) return eta.values.front() * (s / eta.grid.inner_radius());
  return interpolate(eta, s);
}

/// Max-norm distance after normalising the reference to max 1 with the same sign convention.
inline double max_distance_to(const RadialFunction& f, const std::function<double(double)>& ref) {
  std::vector<double> rv(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) rv[i] = ref(f.grid[i]);
  detail::normalise_eigenvector(rv);
  double d = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) d = std::max(d, std::abs(f.values[i] - rv[i]));
  return d;
}

struct NondegeneracyReport {
  bool nondegenerate = false;
  bool no_unit_eigenvalue = false;
  /// Closest computed eigenvalue of the k = 0 problem to Lambda = 1.
  double nearest_eigenvalue = 0.0;
  double z_at_boundary = 0.0;
};

/// Radial nondegeneracy of u_eps on B_{1/eps}: the k = 0 problem has no
/// eigenvalue at 1 (within tol) and Z(1/eps) != 0.
inline NondegeneracyReport radial_nondegeneracy_check(const ProblemParams& p, double eps, double tol = 1e-6,
                                                      std::size_t nodes = kDefaultNodes) {
  detail::require(eps > 0.0 && eps < 1.0, "nondegeneracy check needs 0 < eps < 1");
  const auto prob = SpectralProblem::lambda(p, 0, 1.0 / eps, nodes);
  const auto pen = build_pencil(prob);
  NondegeneracyReport rep;
  const std::size_t lo = count_below(pen, 1.0 - tol);
  const std::size_t hi = count_below(pen, 1.0 + tol);
  rep.no_unit_eigenvalue = lo == hi;
  // Nearest eigenvalue: the ones just below and above 1.
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t j : {lo, lo + 1}) {
    if (j < 1 || j > pen.size()) continue;
    const double v = pencil_eigenvalue(pen, j);
    if (std::abs(v - 1.0) < std::abs(best - 1.0)) best = v;
  }
  rep.nearest_eigenvalue = best;
  rep.z_at_boundary = eval_radial(RadialProfile::radial_kernel(p), 1.0 / eps);
  rep.nondegenerate = rep.no_unit_eigenvalue && rep.z_at_boundary != 0.0;
  return rep;
}

struct SlopeReport {
  double finite_difference = 0.0;
  /// dLambda/dalpha of the discrete pencil from the eigenvector at alpha.
  double hellmann_feynman = 0.0;
  double limit = 0.0;  // -(N+alpha)/2
};

/// d Lambda_1^eps / d alpha for the weighted problem on (0, 1/eps).
inline SlopeReport eigen_slope(const ProblemParams& p, double eps, double dalpha, std::size_t nodes = kDefaultNodes) {
  detail::require(eps > 0.0 && eps < 1.0, "eigen_slope needs 0 < eps < 1");
  detail::require(dalpha >= 1e-4 && dalpha <= 1e-1, "dalpha must lie in [1e-4, 1e-1]");
  detail::require(p.alpha() - dalpha >= 0.0, "alpha - dalpha must stay >= 0");
  const double radius = 1.0 / eps;
  const double up = first_eigenvalue(SpectralProblem::weighted(p.with_alpha(p.alpha() + dalpha), radius, nodes));
  const double dn = first_eigenvalue(SpectralProblem::weighted(p.with_alpha(p.alpha() - dalpha), radius, nodes));
  SlopeReport rep;
  rep.finite_difference = (up - dn) / (2.0 * dalpha);
  rep.limit = -(p.dim() + p.alpha()) / 2.0;

  const auto prob = SpectralProblem::weighted(p, radius, nodes);
  const auto pen = build_pencil(prob);
  const double sigma = pencil_eigenvalue(pen, 1);
  const auto x = pencil_eigenvector(pen, sigma);
  const auto b = detail::box_scheme(prob.grid);
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = b.nodes[i];
    num += linearised_potential_dalpha(p, r) * std::pow(r, p.dim() - 1.0) * b.width[i] * x[i] * x[i];
    den += pen.mass[i] * x[i] * x[i];
  }
  rep.hellmann_feynman = -num / den;
  return rep;
}

struct TwoGridEstimate {
  double coarse = 0.0;
  double fine = 0.0;
  double extrapolated = 0.0;
  double error_estimate = 0.0;
};

/// Eigenvalue h on n and 2n-1 nodes (half the step) with second-order Richardson extrapolation.
inline TwoGridEstimate two_grid_estimate(const SpectralProblem& prob, int h = 1) {
  SpectralProblem fine = prob;
  fine.grid = RadialGrid::geometric(prob.grid.outer_radius(), 2 * prob.grid.size() - 1, prob.grid.inner_radius());
  TwoGridEstimate e;
  e.coarse = pencil_eigenvalue(build_pencil(prob), static_cast<std::size_t>(h));
  e.fine = pencil_eigenvalue(build_pencil(fine), static_cast<std::size_t>(h));
  e.extrapolated = e.fine + (e.fine - e.coarse) / 3.0;
  e.error_estimate = std::abs(e.fine - e.coarse) / 3.0;
  if (prob.form == SpectralForm::transformed_form) {
    e.coarse = -e.coarse;
    e.fine = -e.fine;
    e.extrapolated = -e.extrapolated;
  }
  return e;
}

}  // namespace henon
