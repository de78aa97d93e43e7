#pragma once

// Integral identities satisfied by the bubble and its truncations, and the
// weighted Sobolev constant with its Rayleigh-type quotient.

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "henon/closed_forms.hpp"
#include "henon/errors.hpp"
#include "henon/grid.hpp"
#include "henon/params.hpp"
#include "henon/quadrature.hpp"

namespace henon {

inline constexpr double kIdentityTolerance = 1e-4;

struct IdentityReport {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  double rel_error = 0.0;

  bool passes(double tol = kIdentityTolerance) const { return rel_error <= tol; }
};

inline double relative_error(double lhs, double rhs) {
  return std::abs(lhs - rhs) / std::max({std::abs(lhs), std::abs(rhs), 1e-30});
}

inline IdentityReport make_report(std::string name, double lhs, double rhs) {
  return {std::move(name), lhs, rhs, relative_error(lhs, rhs)};
}

/// int_{R^N} |y|^alpha U_lambda^{p_alpha} dy = N omega_N lambda^{-(N-2)/2} / (N+alpha).
inline IdentityReport integral_identity_615(const ProblemParams& p, double lambda,
                                            const QuadratureOptions& opts = {}) {
  const auto u = RadialProfile::scaled_bubble(p, lambda);
  const double n = p.dim();
  const double a = p.alpha();
  const double pe = p.p_alpha();
  const auto q = integrate_radial(
      [&](double r) { return std::pow(r, a + n - 1.0) * std::pow(eval_radial(u, r), pe); }, 0.0,
      std::numeric_limits<double>::infinity(), opts);
  const double area = sphere_area(p.dim());
  return make_report("mass_identity", area * q.value, area / std::pow(lambda, (n - 2.0) / 2.0) / (n + a));
}

/// int_{R^N} |y|^alpha Z U^{p_alpha - 1} dy = -N omega_N (N-2) / (C(alpha) p_alpha).
inline IdentityReport integral_identity_633(const ProblemParams& p, const QuadratureOptions& opts = {}) {
  const auto z = RadialProfile::radial_kernel(p);
  const auto u = RadialProfile::bubble(p);
  const double n = p.dim();
  const double a = p.alpha();
  const double pe = p.p_alpha();
  const auto q = integrate_radial(
      [&](double r) { return std::pow(r, a + n - 1.0) * eval_radial(z, r) * std::pow(eval_radial(u, r), pe - 1.0); },
      0.0, std::numeric_limits<double>::infinity(), opts);
  const double area = sphere_area(p.dim());
  return make_report("kernel_identity", area * q.value, -area * (n - 2.0) / (p.c_alpha() * pe));
}

enum class PohozaevForm {
  /// Boundary-constant term carries the factor C(alpha), as obtained by
  /// testing -Lap u = C(alpha)|x|^alpha (u+gamma)^p against x . grad u.
  consistent,
  /// Boundary-constant term without C(alpha).
  literal,
};

/// Pohozaev balance on B_{1/eps} for amplitude * u_eps with gamma = U(1/eps):
///   -C N omega_N gamma^{p+1} / ((p+1) eps^{alpha+N})
///   + ((N-2)/2) gamma C int_B |x|^alpha (u+gamma)^p dx
///   = (1/(2 eps)) int_{dB} (du/dnu)^2.
/// amplitude != 1 probes a non-solution.
inline IdentityReport pohozaev_check(const ProblemParams& p, double eps, PohozaevForm form = PohozaevForm::consistent,
                                     double amplitude = 1.0, const QuadratureOptions& opts = {}) {
  detail::require(eps > 0.0 && eps < 1.0, "Pohozaev check needs 0 < eps < 1");
  detail::require(std::isfinite(amplitude), "amplitude must be finite");
  const double n = p.dim();
  const double a = p.alpha();
  const double pe = p.p_alpha();
  const double c = p.c_alpha();
  const double outer = 1.0 / eps;
  const double gamma = detail::bubble_value(p, outer);
  const double area = sphere_area(p.dim());
  const auto ue = RadialProfile::truncated(p, eps);
  const auto q = integrate_radial(
      [&](double r) { return std::pow(r, a + n - 1.0) * std::pow(amplitude * eval_radial(ue, r) + gamma, pe); }, 0.0,
      outer, opts);
  const double boundary_coef = form == PohozaevForm::consistent ? c : 1.0;
  const double lhs = -boundary_coef * area * std::pow(gamma, pe + 1.0) / ((pe + 1.0) * std::pow(eps, a + n)) +
                     (n - 2.0) / 2.0 * gamma * c * area * q.value;
  const double du = amplitude * bubble_derivative(p, outer);
  const double rhs = 1.0 / (2.0 * eps) * area * std::pow(outer, n - 1.0) * du * du;
  return make_report(form == PohozaevForm::consistent ? "pohozaev" : "pohozaev_literal", lhs, rhs);
}

/// S(M) = M(M-2) [Gamma(M/2)^2 / (2 Gamma(M))]^{2/M}, the radial Sobolev constant in dimension M > 2.
inline double sobolev_S(double m) {
  detail::require(m > 2.0 && std::isfinite(m), "S(M) needs M > 2");
  const double log_ratio = 2.0 * std::lgamma(m / 2.0) - std::log(2.0) - std::lgamma(m);
  return m * (m - 2.0) * std::exp(2.0 / m * log_ratio);
}

/// C(alpha, N) = ((alpha+2)/2)^{(2N-2+alpha)/(N+alpha)} S(M) |S^{N-1}|^{(2+alpha)/(N+alpha)}.
inline double sobolev_constant(const ProblemParams& p) {
  const double n = p.dim();
  const double a = p.alpha();
  const double sphere = 2.0 * std::pow(std::acos(-1.0), n / 2.0) / std::tgamma(n / 2.0);
  return std::pow((a + 2.0) / 2.0, (2.0 * n - 2.0 + a) / (n + a)) * sobolev_S(p.fictitious_dim()) *
         std::pow(sphere, (2.0 + a) / (n + a));
}

/// Critical weighted Lebesgue exponent 2(N+alpha)/(N-2).
inline double sobolev_exponent(const ProblemParams& p) { return 2.0 * (p.dim() + p.alpha()) / (p.dim() - 2.0); }

/// int |grad f|^2 / (int |x|^alpha |f|^q)^{(N-2)/(N+alpha)} over R^N for a grid
/// function, with power-law tails beyond R.
inline double sobolev_quotient(const RadialFunction& f, const ProblemParams& p) {
  if (max_abs(f) == 0.0) throw DomainError("Sobolev quotient undefined for f = 0");
  const double n = p.dim();
  const double a = p.alpha();
  const double q = sobolev_exponent(p);
  const auto& g = f.grid;
  const auto d = derivative(f);
  std::vector<double> num(g.size()), den(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    num[i] = d[i] * d[i] * std::pow(g[i], n - 1.0);
    den[i] = std::pow(g[i], a + n - 1.0) * std::pow(std::abs(f.values[i]), q);
  }
  double num_total = integrate_on_grid(g, num);
  double den_total = integrate_on_grid(g, den);
  if (f.tail.kind != TailModel::Kind::compact) {
    double w_num, w_den;
    if (f.tail.kind == TailModel::Kind::power_law) {
      w_num = 2.0 * (f.tail.exponent - 1.0) + n - 1.0;
      w_den = a + n - 1.0 + q * f.tail.exponent;
    } else {
      w_num = outer_exponent(g, num);
      w_den = outer_exponent(g, den);
    }
    if (num.back() > 0.0) num_total += power_law_tail(g.outer_radius(), num.back(), w_num);
    if (den.back() > 0.0) den_total += power_law_tail(g.outer_radius(), den.back(), w_den);
  }
  const double area = sphere_area(p.dim());
  return area * num_total / std::pow(area * den_total, (n - 2.0) / (n + a));
}

/// Same quotient for a closed-form bubble-type profile, by adaptive quadrature
/// with the analytic derivative.
inline double sobolev_quotient(const RadialProfile& f, const QuadratureOptions& opts = {}) {
  detail::require(f.kind == ProfileKind::bubble || f.kind == ProfileKind::scaled_bubble,
                  "closed-form Sobolev quotient is available for U and U_lambda");
  const ProblemParams& p = f.params;
  const double n = p.dim();
  const double a = p.alpha();
  const double q = sobolev_exponent(p);
  const double lam = f.kind == ProfileKind::scaled_bubble ? f.lambda : 1.0;
  const double amp = std::pow(lam, (n - 2.0) / 2.0);
  const double inf = std::numeric_limits<double>::infinity();
  const auto num = integrate_radial(
      [&](double r) {
        const double d = amp * lam * bubble_derivative(p, lam * r);
        return d * d * std::pow(r, n - 1.0);
      },
      0.0, inf, opts);
  const auto den = integrate_radial(
      [&](double r) { return std::pow(r, a + n - 1.0) * std::pow(std::abs(eval_radial(f, r)), q); }, 0.0, inf, opts);
  const double area = sphere_area(p.dim());
  return area * num.value / std::pow(area * den.value, (n - 2.0) / (n + a));
}

}  // namespace henon
