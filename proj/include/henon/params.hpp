#pragma once

// Exact arithmetic of the problem constants: exponents, fictitious
// dimension, spherical-harmonic data, closed-form first eigenvalues and the
// Morse index / kernel dimension of the standard bubble.

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "henon/errors.hpp"

namespace henon {

/// Dimension N and weight exponent alpha of -Lap u = C(alpha)|x|^alpha u^p,
/// together with the derived constants. Immutable once built.
class ProblemParams {
 public:
  static ProblemParams make(int dim, double alpha) {
    detail::require(dim >= 3, "dimension N must be >= 3, got " + std::to_string(dim));
    detail::require(std::isfinite(alpha) && alpha >= 0.0,
                    "exponent alpha must be finite and >= 0");
    return ProblemParams(dim, alpha);
  }

  int dim() const noexcept { return dim_; }
  double alpha() const noexcept { return alpha_; }
  /// C(alpha) = (N+alpha)(N-2).
  double c_alpha() const noexcept { return c_alpha_; }
  /// Critical exponent p_alpha = (N+2+2alpha)/(N-2).
  double p_alpha() const noexcept { return p_alpha_; }
  /// Fictitious dimension M = 2(N+alpha)/(2+alpha).
  double fictitious_dim() const noexcept { return fictitious_dim_; }
  /// p_alpha * C(alpha) = (N+2+2alpha)(N+alpha), the linearised potential amplitude.
  double potential_amplitude() const noexcept { return (dim_ + 2.0 + 2.0 * alpha_) * (dim_ + alpha_); }

  ProblemParams with_alpha(double alpha) const { return make(dim_, alpha); }

  friend bool operator==(const ProblemParams&, const ProblemParams&) = default;

 private:
  ProblemParams(int dim, double alpha)
      : dim_(dim),
        alpha_(alpha),
        c_alpha_((dim + alpha) * (dim - 2.0)),
        p_alpha_((dim + 2.0 + 2.0 * alpha) / (dim - 2.0)),
        fictitious_dim_(2.0 * (dim + alpha) / (2.0 + alpha)) {}

  int dim_;
  double alpha_;
  double c_alpha_;
  double p_alpha_;
  double fictitious_dim_;
};

/// Volume of the unit ball, omega_N = pi^{N/2} / Gamma(N/2 + 1).
inline double unit_ball_volume(int dim) {
  const double half = dim / 2.0;
  return std::pow(std::acos(-1.0), half) / std::tgamma(half + 1.0);
}

/// Area N omega_N of the unit sphere S^{N-1}.
inline double sphere_area(int dim) { return dim * unit_ball_volume(dim); }

/// Tolerance used to decide whether a floating alpha is an even integer.
inline constexpr double kEvenAlphaTolerance = 1e-9;

namespace detail {

inline void require_mode(int k) { require(k >= 0, "mode index k must be >= 0"); }

}  // namespace detail

/// Eigenvalue mu_k = k(N-2+k) of the Laplace-Beltrami operator on S^{N-1}.
inline double mu(const ProblemParams& params, int k) {
  detail::require_mode(k);
  return static_cast<double>(k) * (params.dim() - 2 + k);
}

/// dim Y_k(R^N) = (N+2k-2)(N+k-3)! / ((N-2)! k!), computed exactly.
inline std::int64_t harmonic_multiplicity(int dim, int k) {
  detail::require(dim >= 3, "harmonic_multiplicity needs N >= 3");
  detail::require_mode(k);
  // binom(N+k-3, k) by a running product; every partial product is an exact
  // binomial coefficient, so the division never truncates.
  using wide = unsigned __int128;
  constexpr wide limit = static_cast<wide>(std::numeric_limits<std::int64_t>::max());
  wide binom = 1;
  for (int i = 1; i <= k; ++i) {
    binom = binom * static_cast<wide>(dim - 3 + i) / static_cast<wide>(i);
    if (binom > limit) throw RangeError("harmonic multiplicity overflows 64-bit range");
  }
  const wide scaled = binom * static_cast<wide>(dim + 2 * k - 2);
  if (scaled % static_cast<wide>(dim - 2) != 0)
    throw RangeError("harmonic multiplicity: non-integer intermediate");
  const wide result = scaled / static_cast<wide>(dim - 2);
  if (result > limit) throw RangeError("harmonic multiplicity overflows 64-bit range");
  return static_cast<std::int64_t>(result);
}

inline std::int64_t harmonic_multiplicity(const ProblemParams& params, int k) {
  return harmonic_multiplicity(params.dim(), k);
}

/// Closed-form first eigenvalue of the mode-k weighted problem,
/// Lambda_{1,k} = (N-2+2k)(N+alpha+2k)/((N+2+2alpha)(N+alpha)).
inline double lambda_first_closed(const ProblemParams& params, int k) {
  detail::require_mode(k);
  const double n = params.dim();
  const double a = params.alpha();
  return (n - 2.0 + 2.0 * k) * (n + a + 2.0 * k) / ((n + 2.0 + 2.0 * a) * (n + a));
}

/// Mode k is a negative direction iff k < (alpha+2)/2, i.e. 2k-2 < alpha.
inline bool mode_contributes(const ProblemParams& params, int k) {
  detail::require_mode(k);
  return 2.0 * k - 2.0 < params.alpha();
}

struct MorseMode {
  int k;
  double lambda_first;
  std::int64_t multiplicity;
  bool contributes;
};

struct MorseReport {
  ProblemParams params;
  /// Every contributing mode followed by the first non-contributing one.
  std::vector<MorseMode> per_mode;
  std::int64_t total;
};

inline MorseReport morse_index(const ProblemParams& params) {
  MorseReport report{params, {}, 0};
  for (int k = 0;; ++k) {
    const bool contributes = mode_contributes(params, k);
    const auto mult = harmonic_multiplicity(params, k);
    report.per_mode.push_back({k, lambda_first_closed(params, k), mult, contributes});
    if (!contributes) break;
    report.total += mult;
  }
  return report;
}

/// If alpha = 2(k-1) up to kEvenAlphaTolerance, returns that k, otherwise 0.
inline int degenerate_mode(const ProblemParams& params) {
  const double half = std::round(params.alpha() / 2.0);
  if (std::abs(params.alpha() - 2.0 * half) <= kEvenAlphaTolerance) return static_cast<int>(half) + 1;
  return 0;
}

/// Dimension of the bounded kernel of the linearised operator at U_alpha.
inline std::int64_t kernel_dimension(const ProblemParams& params) {
  const int k = degenerate_mode(params);
  if (k == 0) return 1;
  return 1 + harmonic_multiplicity(params, k);
}

/// Limit first eigenvalue of the 1/r^2-weighted problem on (0, inf),
/// -(2N+alpha-2)(alpha+2)/4.
inline double lambda_limit(const ProblemParams& params) {
  const double n = params.dim();
  const double a = params.alpha();
  return -(2.0 * n + a - 2.0) * (a + 2.0) / 4.0;
}

/// Limit bifurcation value alpha_k = 2(k-1). The defining relation
/// (2N+alpha_k-2)(alpha_k+2)/4 = mu_k is checked in exact integer arithmetic.
inline double alpha_k_exact(const ProblemParams& params, int k) {
  detail::require(k >= 1, "alpha_k is defined for k >= 1");
  const std::int64_t n = params.dim();
  const std::int64_t a = 2 * (k - 1);
  const std::int64_t lhs = (2 * n + a - 2) * (a + 2);
  const std::int64_t rhs = 4 * static_cast<std::int64_t>(k) * (n - 2 + k);
  if (lhs != rhs) throw NumericalError("alpha_k identity failed");
  return static_cast<double>(a);
}

}  // namespace henon
