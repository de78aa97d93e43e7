#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "henon/errors.hpp"
#include "henon/params.hpp"

namespace henon {

enum class ProfileKind {
  scaled_bubble,   // U_{lambda,alpha}
  bubble,          // U_alpha, U(0) = 1
  truncated,       // u_{eps,alpha} = U_alpha - U_alpha(1/eps), zero outside B_{1/eps}
  radial_kernel,   // Z, the radial kernel element
  first_mode,      // psi_{1,k}, first eigenfunction of mode k
  limit_mode,      // z, limit first eigenfunction of the 1/r^2-weighted problem
};

inline std::string to_string(ProfileKind kind) {
  switch (kind) {
    case ProfileKind::scaled_bubble: return "U_lambda";
    case ProfileKind::bubble: return "U";
    case ProfileKind::truncated: return "u_eps";
    case ProfileKind::radial_kernel: return "Z";
    case ProfileKind::first_mode: return "psi_first";
    case ProfileKind::limit_mode: return "z_limit";
  }
  return "unknown";
}

/// A closed-form radial function of r = |x|.
struct RadialProfile {
  ProblemParams params;
  ProfileKind kind;
  double lambda = 1.0;
  double eps = 0.0;
  int k = 0;

  static RadialProfile bubble(const ProblemParams& p) { return {p, ProfileKind::bubble}; }
  static RadialProfile scaled_bubble(const ProblemParams& p, double lambda) {
    detail::require(lambda > 0.0 && std::isfinite(lambda), "dilation lambda must be positive");
    return {p, ProfileKind::scaled_bubble, lambda};
  }
  static RadialProfile truncated(const ProblemParams& p, double eps) {
    detail::require(eps > 0.0 && std::isfinite(eps), "eps must be positive");
    return {p, ProfileKind::truncated, 1.0, eps};
  }
  static RadialProfile radial_kernel(const ProblemParams& p) { return {p, ProfileKind::radial_kernel}; }
  static RadialProfile first_mode(const ProblemParams& p, int k) {
    detail::require(k >= 0, "mode index k must be >= 0");
    return {p, ProfileKind::first_mode, 1.0, 0.0, k};
  }
  static RadialProfile limit_mode(const ProblemParams& p) { return {p, ProfileKind::limit_mode}; }

  /// Power-law exponent of |f(r)| as r -> infinity (0 for compact support
  /// is reported through has_compact_support()).
  double tail_exponent() const {
    const double n = params.dim();
    switch (kind) {
      case ProfileKind::scaled_bubble:
      case ProfileKind::bubble:
      case ProfileKind::radial_kernel: return -(n - 2.0);
      case ProfileKind::first_mode: return -(n - 2.0 + k);
      case ProfileKind::limit_mode: return 1.0 - n - params.alpha() / 2.0;
      case ProfileKind::truncated: return 0.0;
    }
    return 0.0;
  }
  bool has_compact_support() const { return kind == ProfileKind::truncated; }
};

namespace detail {

/// log(1 + e^x) without overflow.
inline double log1p_exp(double x) {
  if (x > 0.0) return x + std::log1p(std::exp(-x));
  return std::log1p(std::exp(x));
}

/// (1 + r^{2+alpha})^{-e} for r > 0, evaluated in log form.
inline double inverse_power_of_one_plus(double r, double two_plus_alpha, double e) {
  return std::exp(-e * log1p_exp(two_plus_alpha * std::log(r)));
}

inline double bubble_value(const ProblemParams& p, double r) {
  if (r == 0.0) return 1.0;
  const double q = 2.0 + p.alpha();
  return inverse_power_of_one_plus(r, q, (p.dim() - 2.0) / q);
}

}  // namespace detail

inline double eval_radial(const RadialProfile& f, double r) {
  detail::require(r >= 0.0 && !std::isnan(r), "radius must be >= 0");
  const ProblemParams& p = f.params;
  const double n = p.dim();
  const double q = 2.0 + p.alpha();
  switch (f.kind) {
    case ProfileKind::bubble: return detail::bubble_value(p, r);
    case ProfileKind::scaled_bubble:
      return std::pow(f.lambda, (n - 2.0) / 2.0) * detail::bubble_value(p, f.lambda * r);
    case ProfileKind::truncated: {
      const double outer = 1.0 / f.eps;
      if (r >= outer) return 0.0;
      return detail::bubble_value(p, r) - detail::bubble_value(p, outer);
    }
    case ProfileKind::radial_kernel: {
      if (r == 0.0) return 1.0;
      if (r == 1.0) return 0.0;
      const double x = q * std::log(r);
      // 1 - r^q = sign * exp(log|1 - e^x|)
      const double log_num = x > 0.0 ? x + std::log(-std::expm1(-x)) : std::log(-std::expm1(x));
      const double sign = x > 0.0 ? -1.0 : 1.0;
      return sign * std::exp(log_num - (n + p.alpha()) / q * detail::log1p_exp(x));
    }
    case ProfileKind::first_mode: {
      if (r == 0.0) return f.k == 0 ? 1.0 : 0.0;
      const double x = q * std::log(r);
      return std::exp(f.k * std::log(r) - (n + 2.0 * (f.k - 1)) / q * detail::log1p_exp(x));
    }
    case ProfileKind::limit_mode: {
      if (r == 0.0) return 0.0;
      const double x = q * std::log(r);
      return std::exp(0.5 * x - (n + p.alpha()) / q * detail::log1p_exp(x));
    }
  }
  return 0.0;
}

/// Radial derivative of the bubble, U'(r) = -(N-2) r^{1+alpha} (1+r^{2+alpha})^{-(N+alpha)/(2+alpha)}.
inline double bubble_derivative(const ProblemParams& p, double r) {
  if (r == 0.0) return 0.0;
  const double q = 2.0 + p.alpha();
  return -(p.dim() - 2.0) * std::pow(r, 1.0 + p.alpha()) *
         detail::inverse_power_of_one_plus(r, q, (p.dim() + p.alpha()) / q);
}

/// Point x = (x', x'') in R^{N/2} x R^{N/2} described by s = |x'|, t = |x''|.
struct BiRadialPoint {
  double s;
  double t;
};

namespace detail {

inline void require_explicit_family(const ProblemParams& p) {
  require(std::abs(p.alpha() - 2.0) <= kEvenAlphaTolerance, "explicit nonradial family needs alpha = 2");
  require(p.dim() >= 4 && p.dim() % 2 == 0, "explicit nonradial family needs even N >= 4");
}

}  // namespace detail

/// Nonradial solution u = (1 + |x|^4 - 2a(|x'|^2 - |x''|^2) + a^2)^{-(N-2)/4}
/// of the alpha = 2 problem. The base is bounded below by 1 for every real
/// a; the guard reports a violation instead of returning a NaN.
inline double eval_nonradial_explicit(const ProblemParams& p, double a, BiRadialPoint x) {
  detail::require_explicit_family(p);
  detail::require(x.s >= 0.0 && x.t >= 0.0, "bi-radial coordinates must be >= 0");
  const double s2 = x.s * x.s;
  const double t2 = x.t * x.t;
  const double r2 = s2 + t2;
  const double base = 1.0 + r2 * r2 - 2.0 * a * (s2 - t2) + a * a;
  if (!(base > 0.0)) throw NumericalError("nonpositive base in explicit nonradial family");
  return std::pow(base, -(p.dim() - 2.0) / 4.0);
}

/// Cartesian wrapper: x has N components, the first N/2 form x'.
inline double eval_nonradial_cartesian(const ProblemParams& p, double a, std::span<const double> x) {
  detail::require_explicit_family(p);
  detail::require(static_cast<int>(x.size()) == p.dim(), "point must have N components");
  const std::size_t half = x.size() / 2;
  double s2 = 0.0;
  double t2 = 0.0;
  for (std::size_t i = 0; i < half; ++i) s2 += x[i] * x[i];
  for (std::size_t i = half; i < x.size(); ++i) t2 += x[i] * x[i];
  return eval_nonradial_explicit(p, a, {std::sqrt(s2), std::sqrt(t2)});
}

struct GradientConditionSample {
  BiRadialPoint point;
  double gradient_norm_sq;  // |grad Y|^2
  double weight_term;       // ((2+alpha)/2)^2 |x|^alpha
};

struct GradientConditionReport {
  std::vector<GradientConditionSample> samples;
  double max_abs_deviation = 0.0;
};

/// Checks |grad Y|^2 = ((2+alpha)/2)^2 |x|^alpha for Y = |x'|^2 - |x''|^2.
/// Each sample is lifted to a Cartesian point x' = (s,0,..), x'' = (t,0,..)
/// and both sides are evaluated from the Cartesian components.
inline GradientConditionReport check_harmonic_gradient_condition(const ProblemParams& p,
                                                                std::span<const BiRadialPoint> samples) {
  detail::require_explicit_family(p);
  const int n = p.dim();
  const int half = n / 2;
  GradientConditionReport report;
  std::vector<double> x(static_cast<std::size_t>(n));
  for (const auto& pt : samples) {
    std::fill(x.begin(), x.end(), 0.0);
    x[0] = pt.s;
    x[static_cast<std::size_t>(half)] = pt.t;
    double grad_sq = 0.0;
    double norm_sq = 0.0;
    for (int i = 0; i < n; ++i) {
      const double xi = x[static_cast<std::size_t>(i)];
      const double dy = i < half ? 2.0 * xi : -2.0 * xi;
      grad_sq += dy * dy;
      norm_sq += xi * xi;
    }
    const double c = (2.0 + p.alpha()) / 2.0;
    const double weight = c * c * std::pow(std::sqrt(norm_sq), p.alpha());
    report.samples.push_back({pt, grad_sq, weight});
    report.max_abs_deviation = std::max(report.max_abs_deviation, std::abs(grad_sq - weight));
  }
  return report;
}

}  // namespace henon
