#pragma once

// Symmetric-definite pencils (A, B) with A tridiagonal and B diagonal positive.
// Eigenvalues by Sturm-sequence bisection on A - sigma B; eigenvectors by
// inverse iteration. The inertia of A - sigma B is counted directly, without
// forming B^{-1/2} A B^{-1/2}: for strongly graded pencils the scaled matrix
// loses the small eigenvalues to rounding.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include "henon/errors.hpp"

namespace henon {

struct TridiagonalPencil {
  std::vector<double> diag;  // A_ii
  std::vector<double> off;   // A_{i,i+1}
  std::vector<double> mass;  // B_ii > 0

  std::size_t size() const noexcept { return diag.size(); }

  void validate() const {
    detail::require(!diag.empty(), "empty pencil");
    detail::require(off.size() + 1 == diag.size() && mass.size() == diag.size(), "pencil size mismatch");
    for (double b : mass)
      if (!(b > 0.0) || !std::isfinite(b)) throw DomainError("pencil mass matrix must be positive");
  }
};

/// Number of generalized eigenvalues strictly below sigma (Sylvester inertia
/// of the LDL^T factorisation of A - sigma B).
inline std::size_t count_below(const TridiagonalPencil& p, double sigma) {
  const std::size_t n = p.size();
  std::size_t count = 0;
  double d = p.diag[0] - sigma * p.mass[0];
  if (d < 0.0) ++count;
  for (std::size_t i = 1; i < n; ++i) {
    if (d == 0.0) d = std::numeric_limits<double>::min();
    d = p.diag[i] - sigma * p.mass[i] - p.off[i - 1] * p.off[i - 1] / d;
    if (d < 0.0) ++count;
  }
  return count;
}

struct BisectionOptions {
  double abs_tol = 1e-10;
  int max_expansions = 1100;
};

/// j-th smallest eigenvalue (j >= 1) by bisection.
inline double pencil_eigenvalue(const TridiagonalPencil& p, std::size_t j, const BisectionOptions& opts = {}) {
  detail::require(j >= 1 && j <= p.size(), "eigenvalue index out of range");
  double lo = -1.0, hi = 1.0;
  int expansions = 0;
  while (count_below(p, lo) >= j) {
    lo *= 2.0;
    if (++expansions > opts.max_expansions) throw ConvergenceError("bisection bracket expansion failed");
  }
  while (count_below(p, hi) < j) {
    hi *= 2.0;
    if (++expansions > opts.max_expansions) throw ConvergenceError("bisection bracket expansion failed");
  }
  for (int it = 0; it < 4000; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (hi - lo <= std::max(opts.abs_tol, 4.0 * std::numeric_limits<double>::epsilon() * std::abs(mid)))
      return mid;
    if (count_below(p, mid) >= j)
      hi = mid;
    else
      lo = mid;
  }
  throw ConvergenceError("bisection did not converge");
}

/// Solves the tridiagonal system T x = rhs (sub = super = off, diagonal dg)
/// by Gaussian elimination with partial pivoting. A zero pivot is replaced
/// by a tiny value, which is what inverse iteration wants.
inline std::vector<double> solve_tridiagonal(std::vector<double> dg, const std::vector<double>& off,
                                             std::vector<double> rhs) {
  const std::size_t n = dg.size();
  std::vector<double> up(n, 0.0), up2(n, 0.0), lower(off);
  // Row i holds (lower[i-1], dg[i], up[i], up2[i]) after pivoting.
  for (std::size_t i = 0; i + 1 < n; ++i) up[i] = off[i];
  const double tiny = std::numeric_limits<double>::min() * 1e10;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    double a = dg[i];
    const double b = lower[i];  // subdiagonal entry in row i+1
    if (std::abs(a) >= std::abs(b)) {
      if (a == 0.0) a = dg[i] = tiny;
      const double m = b / a;
      dg[i + 1] -= m * up[i];
      if (i + 2 < n) up[i + 1] -= m * up2[i];
      rhs[i + 1] -= m * rhs[i];
    } else {
      // Swap rows i and i+1.
      const double m = a / b;
      const double row1_diag = up[i];
      const double row1_up = dg[i + 1];
      const double row1_up2 = i + 2 < n ? up[i + 1] : 0.0;
      dg[i] = b;
      up[i] = row1_up;
      up2[i] = row1_up2;
      dg[i + 1] = row1_diag - m * row1_up;
      if (i + 2 < n) up[i + 1] = -m * row1_up2;
      std::swap(rhs[i], rhs[i + 1]);
      rhs[i + 1] -= m * rhs[i];
    }
  }
  if (dg[n - 1] == 0.0) dg[n - 1] = tiny;
  std::vector<double> x(n);
  for (std::size_t ii = n; ii-- > 0;) {
    double v = rhs[ii];
    if (ii + 1 < n) v -= up[ii] * x[ii + 1];
    if (ii + 2 < n) v -= up2[ii] * x[ii + 2];
    x[ii] = v / dg[ii];
  }
  return x;
}

/// Eigenvector for a computed eigenvalue by inverse iteration on
/// (A - sigma B) x_{k+1} = B x_k.
inline std::vector<double> pencil_eigenvector(const TridiagonalPencil& p, double sigma, int max_iter = 8) {
  const std::size_t n = p.size();
  std::vector<double> shifted(n);
  for (std::size_t i = 0; i < n; ++i) shifted[i] = p.diag[i] - sigma * p.mass[i];
  std::vector<double> x(n);
  // Deterministic, non-symmetric start vector.
  for (std::size_t i = 0; i < n; ++i) x[i] = 1.0 + 0.5 * std::sin(0.37 * static_cast<double>(i) + 1.0);
  auto normalize = [](std::vector<double>& v) {
    double m = 0.0;
    for (double e : v) m = std::max(m, std::abs(e));
    if (!(m > 0.0) || !std::isfinite(m)) throw ConvergenceError("inverse iteration broke down");
    for (double& e : v) e /= m;
  };
  normalize(x);
  for (int it = 0; it < max_iter; ++it) {
    std::vector<double> rhs(n);
    for (std::size_t i = 0; i < n; ++i) rhs[i] = p.mass[i] * x[i];
    auto y = solve_tridiagonal(shifted, p.off, rhs);
    normalize(y);
    // Align signs before measuring the change.
    double dot = 0.0;
    for (std::size_t i = 0; i < n; ++i) dot += y[i] * x[i];
    if (dot < 0.0)
      for (double& e : y) e = -e;
    double change = 0.0;
    for (std::size_t i = 0; i < n; ++i) change = std::max(change, std::abs(y[i] - x[i]));
    x = std::move(y);
    if (change < 1e-13 && it >= 1) return x;
  }
  return x;
}

/// Replaces x[0..match] by the forward three-term recurrence of
/// (A - sigma B) x = 0 started at node 0, scaled to agree with x at match.
/// Near the origin the regular solution dominates the recurrence, while the
/// inverse-iteration vector there carries rounding from rows whose weights are
/// many orders of magnitude below the matrix scale.
inline void refine_leading_components(const TridiagonalPencil& p, double sigma, std::vector<double>& x,
                                      std::size_t match) {
  const std::size_t n = p.size();
  if (n < 3 || match < 2 || match >= n) return;
  std::vector<double> y(match + 1);
  y[0] = 1.0;
  y[1] = -(p.diag[0] - sigma * p.mass[0]) * y[0] / p.off[0];
  for (std::size_t i = 1; i < match; ++i)
    y[i + 1] = -((p.diag[i] - sigma * p.mass[i]) * y[i] + p.off[i - 1] * y[i - 1]) / p.off[i];
  if (!std::isfinite(y[match]) || y[match] == 0.0) return;
  const double scale = x[match] / y[match];
  for (std::size_t i = 0; i < match; ++i) x[i] = scale * y[i];
}

/// Relative residual max|A x - sigma B x| / max|B x| of an eigenpair.
inline double pencil_residual(const TridiagonalPencil& p, double sigma, const std::vector<double>& x) {
  const std::size_t n = p.size();
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double ax = p.diag[i] * x[i];
    if (i > 0) ax += p.off[i - 1] * x[i - 1];
    if (i + 1 < n) ax += p.off[i] * x[i + 1];
    num = std::max(num, std::abs(ax - sigma * p.mass[i] * x[i]));
    den = std::max(den, std::abs(p.mass[i] * x[i]));
  }
  return num / std::max(den, std::numeric_limits<double>::min());
}

}  // namespace henon
