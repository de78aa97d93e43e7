#pragma once

// Degeneracy values alpha_k^eps solving Lambda_1^eps(alpha) = -mu_k, the
// symmetry annotations of the bifurcating branches, and Morse-index jumps.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "henon/errors.hpp"
#include "henon/params.hpp"
#include "henon/spectral.hpp"

namespace henon {

inline constexpr double kMaxAlphaBracket = 60.0;

struct RootOptions {
  double residual_tol = 1e-6;
  double alpha_tol = 1e-8;
  int max_iterations = 100;
  std::size_t nodes = kDefaultNodes;
  /// Use the two-grid extrapolated eigenvalue instead of the single-grid one.
  bool richardson = false;
  /// Samples used to verify that the residual function decreases on the bracket.
  int monotonicity_samples = 6;
};

struct BifurcationPoint {
  int k = 1;
  double eps = 0.0;
  double alpha_root = 0.0;
  double residual = 0.0;  // Lambda_1^eps(alpha_root) + mu_k
  double limit_gap = 0.0;  // |alpha_root - 2(k-1)|
  double bracket_lo = 0.0;
  double bracket_hi = 0.0;
  int iterations = 0;
  int evaluations = 0;
  bool monotone_on_bracket = false;
  /// Secant slope of the residual over the bracket.
  double slope = 0.0;

  double radius() const { return 1.0 / eps; }
};

/// alpha -> Lambda_1^eps(alpha) + mu_k for the weighted problem on (0, R).
inline double bifurcation_residual(int dim, int k, double radius, double alpha, const RootOptions& opts = {}) {
  const auto p = ProblemParams::make(dim, alpha);
  const auto prob = SpectralProblem::weighted(p, radius, opts.nodes);
  const double lam = opts.richardson ? two_grid_estimate(prob).extrapolated : first_eigenvalue(prob);
  return lam + mu(p, k);
}

/// Root of alpha -> Lambda_1^eps(alpha) + mu_k by regula falsi with the
/// Illinois modification, falling back to bisection when it stalls. The
/// bracket defaults to 2(k-1) +- 1 and is expanded inside [0, 60].
inline BifurcationPoint find_alpha_k(int dim, int k, double eps, std::optional<std::pair<double, double>> bracket = {},
                                     const RootOptions& opts = {}) {
  detail::require(dim >= 3, "dimension N must be >= 3");
  detail::require(k >= 1, "find_alpha_k needs k >= 1");
  detail::require(eps > 0.0 && eps < 1.0, "find_alpha_k needs 0 < eps < 1");
  const double radius = 1.0 / eps;
  BifurcationPoint bp;
  bp.k = k;
  bp.eps = eps;
  auto f = [&](double a) {
    ++bp.evaluations;
    return bifurcation_residual(dim, k, radius, a, opts);
  };

  const double centre = 2.0 * (k - 1);
  double lo = bracket ? bracket->first : std::clamp(centre - 1.0, 0.0, kMaxAlphaBracket - 1.0);
  double hi = bracket ? bracket->second : std::clamp(centre + 1.0, 1.0, kMaxAlphaBracket);
  detail::require(lo >= 0.0 && hi > lo && hi <= kMaxAlphaBracket, "bracket must satisfy 0 <= lo < hi <= 60");
  double flo = f(lo), fhi = f(hi);
  // The residual decreases in alpha: need f(lo) > 0 > f(hi).
  for (int i = 0; i < 40 && !(flo > 0.0 && fhi < 0.0); ++i) {
    const double w = hi - lo;
    if (flo <= 0.0) {
      if (lo == 0.0) break;
      hi = lo;
      fhi = flo;
      lo = std::max(0.0, lo - 2.0 * w);
      flo = f(lo);
    } else {
      if (hi == kMaxAlphaBracket) break;
      lo = hi;
      flo = fhi;
      hi = std::min(kMaxAlphaBracket, hi + 2.0 * w);
      fhi = f(hi);
    }
  }
  if (flo == 0.0) {
    bp.alpha_root = lo;
  } else if (fhi == 0.0) {
    bp.alpha_root = hi;
  }
  if (!(flo > 0.0 && fhi < 0.0) && flo != 0.0 && fhi != 0.0)
    throw NoSignChangeError("no sign change of Lambda_1 + mu_k in (0, 60] for k = " + std::to_string(k));
  bp.bracket_lo = lo;
  bp.bracket_hi = hi;

  // Monotonicity on the bracket.
  {
    const int ns = std::max(2, opts.monotonicity_samples);
    double prev = flo;
    bool mono = true;
    for (int i = 1; i < ns - 1; ++i) {
      const double v = f(lo + (hi - lo) * i / (ns - 1));
      if (!(v < prev)) mono = false;
      prev = v;
    }
    if (!(fhi < prev)) mono = false;
    bp.monotone_on_bracket = mono;
  }

  if (flo != 0.0 && fhi != 0.0) {
    double a = lo, b = hi, fa = flo, fb = fhi;
    int side = 0;
    double x = a, fx = fa, x_prev = b;
    for (int it = 1; it <= opts.max_iterations; ++it) {
      bp.iterations = it;
      x = (a * fb - b * fa) / (fb - fa);
      // Bisection fallback when the interpolate leaves the bracket, and periodically.
      if (!(x > a && x < b) || it % 8 == 0) x = 0.5 * (a + b);
      fx = f(x);
      if (fx == 0.0) break;
      if ((fx > 0.0) == (fa > 0.0)) {
        a = x;
        fa = fx;
        if (side == -1) fb *= 0.5;
        side = -1;
      } else {
        b = x;
        fb = fx;
        if (side == 1) fa *= 0.5;
        side = 1;
      }
      const bool settled = b - a <= opts.alpha_tol || std::abs(x - x_prev) <= opts.alpha_tol;
      if (std::abs(fx) <= opts.residual_tol && settled) break;
      x_prev = x;
    }
    bp.alpha_root = x;
    bp.residual = fx;
    bp.slope = (fhi - flo) / (hi - lo);
    if (!(std::abs(fx) <= opts.residual_tol)) throw ConvergenceError("alpha_k root finder did not converge");
  }
  bp.limit_gap = std::abs(bp.alpha_root - centre);
  return bp;
}

/// Symmetry groups of the nonradial branches bifurcating at alpha_k: one
/// O(N-1)-invariant branch for odd k, and O(N-h) x O(h) for h = 1..floor(N/2)
/// when k is even.
inline std::vector<std::string> branch_labels(int dim, int k) {
  detail::require(dim >= 3 && k >= 1, "branch labels need N >= 3 and k >= 1");
  std::vector<std::string> out;
  if (k % 2 == 1) {
    out.push_back("O(" + std::to_string(dim - 1) + ")");
  } else {
    for (int h = 1; h <= dim / 2; ++h)
      out.push_back("O(" + std::to_string(dim - h) + ")xO(" + std::to_string(h) + ")");
  }
  return out;
}

struct DiagramRow {
  BifurcationPoint point;
  std::vector<std::string> branches;
  /// Branches are annotated, not computed; they are conjectured to consist of
  /// nonradial solutions only at even alpha (vertical in the (alpha, u) plane).
  bool conjectured_vertical = true;
};

inline std::vector<DiagramRow> bifurcation_diagram(int dim, int k_max, const std::vector<double>& eps_list,
                                                   const RootOptions& opts = {}) {
  detail::require(k_max >= 2, "bifurcation diagram needs k_max >= 2");
  std::vector<DiagramRow> rows;
  for (int k = 2; k <= k_max; ++k)
    for (double eps : eps_list) rows.push_back({find_alpha_k(dim, k, eps, {}, opts), branch_labels(dim, k), true});
  return rows;
}

struct MorseJump {
  int k;
  double alpha_location;  // 2(k-1)
  double alpha_before;
  double alpha_after;
  std::int64_t expected_size;  // harmonic multiplicity
  std::int64_t observed_size;  // jump of m over the interval (all modes crossing in it)
  bool matches;
};

struct MorseTable {
  std::vector<double> alpha;
  std::vector<std::int64_t> morse;
  std::vector<MorseJump> jumps;
  bool non_decreasing = true;
  bool jumps_at_even_integers = true;
};

/// Morse index along an increasing alpha grid with its jumps. The mode k
/// enters once alpha exceeds 2(k-1), so a jump between alpha_i and alpha_{i+1}
/// is attributed to every even 2(k-1) in [alpha_i, alpha_{i+1}).
inline MorseTable morse_jump_table(int dim, const std::vector<double>& alpha_grid) {
  detail::require(alpha_grid.size() >= 2, "alpha grid needs at least two points");
  for (std::size_t i = 1; i < alpha_grid.size(); ++i)
    detail::require(alpha_grid[i] > alpha_grid[i - 1], "alpha grid must be increasing");
  MorseTable t;
  t.alpha = alpha_grid;
  for (double a : alpha_grid) t.morse.push_back(morse_index(ProblemParams::make(dim, a)).total);
  for (std::size_t i = 0; i + 1 < alpha_grid.size(); ++i) {
    const double a0 = alpha_grid[i], a1 = alpha_grid[i + 1];
    const std::int64_t observed = t.morse[i + 1] - t.morse[i];
    if (observed < 0) t.non_decreasing = false;
    std::int64_t expected_total = 0;
    std::vector<MorseJump> here;
    for (int k = 1;; ++k) {
      const double loc = 2.0 * (k - 1);
      if (loc >= a1) break;
      if (loc < a0) continue;
      const auto mult = harmonic_multiplicity(dim, k);
      expected_total += mult;
      here.push_back({k, loc, a0, a1, mult, observed, false});
    }
    for (auto& j : here) {
      j.matches = expected_total == observed;
      t.jumps.push_back(j);
    }
    if (observed != 0 && here.empty()) t.jumps_at_even_integers = false;
    if (observed != expected_total) t.jumps_at_even_integers = false;
  }
  return t;
}

}  // namespace henon
