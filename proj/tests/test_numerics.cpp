#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "henon/closed_forms.hpp"
#include "henon/grid.hpp"
#include "henon/quadrature.hpp"
#include "henon/radial_numerics.hpp"
#include "oracles.hpp"

using namespace henon;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double bubble_energy_oracle(int n, double a) {
  // C(alpha) |S^{N-1}| int r^{alpha+N-1} U^{p+1} dr, Simpson in ln r.
  const auto p = ProblemParams::make(n, a);
  const double q = 2.0 + a;
  auto g = [&](double r) { return std::pow(r, a + n - 1.0) * std::pow(1.0 + std::pow(r, q), -(n - 2.0) / q * (p.p_alpha() + 1.0)); };
  return p.c_alpha() * oracle::sphere_area(n) * oracle::simpson_half_line(g, -30.0, 30.0, 60000);
}

}  // namespace

// ---- grids ------------------------------------------------------------------

TEST(RadialGrid, UniformLayout) {
  const auto g = RadialGrid::uniform(2.0, 8);
  EXPECT_EQ(g.size(), 8u);
  EXPECT_DOUBLE_EQ(g[0], 0.25);
  EXPECT_EQ(g.outer_radius(), 2.0);
  for (std::size_t i = 1; i < g.size(); ++i) EXPECT_NEAR(g[i] - g[i - 1], 0.25, 1e-15);
}

TEST(RadialGrid, GeometricLayout) {
  const auto g = RadialGrid::geometric(100.0, 501);
  EXPECT_NEAR(g.inner_radius(), 1e-4, 1e-18);
  EXPECT_EQ(g.outer_radius(), 100.0);
  const double ratio = g[1] / g[0];
  for (std::size_t i = 1; i < g.size(); ++i) {
    EXPECT_GT(g[i], g[i - 1]);
    EXPECT_NEAR(g[i] / g[i - 1], ratio, 1e-12);
  }
  EXPECT_NEAR(g.step(), std::log(ratio), 1e-12);
}

TEST(RadialGrid, Validation) {
  EXPECT_THROW(RadialGrid::uniform(0.0, 10), DomainError);
  EXPECT_THROW(RadialGrid::uniform(1.0, 1), DomainError);
  EXPECT_THROW(RadialGrid::geometric(1.0, 10, 2.0), DomainError);
  const auto g = RadialGrid::uniform(1.0, 4);
  EXPECT_THROW(RadialFunction(g, std::vector<double>(3, 0.0)), DomainError);
  EXPECT_THROW(RadialFunction(g, {0.0, 1.0, std::nan(""), 0.0}), DomainError);
}

TEST(FdWeights, ThreePointStencil) {
  const std::vector<double> x{-0.1, 0.0, 0.1};
  const auto w = fd_weights(0.0, x, 2);
  EXPECT_NEAR(w[0][1], 1.0, 1e-14);
  EXPECT_NEAR(w[1][0], -5.0, 1e-12);
  EXPECT_NEAR(w[1][2], 5.0, 1e-12);
  EXPECT_NEAR(w[2][0], 100.0, 1e-10);
  EXPECT_NEAR(w[2][1], -200.0, 1e-10);
  EXPECT_NEAR(w[2][2], 100.0, 1e-10);
}

TEST(GridCalculus, DerivativeAndInterpolation) {
  for (auto g : {RadialGrid::uniform(3.0, 600), RadialGrid::geometric(3.0, 600, 1e-3)}) {
    const auto f = sample(g, [](double r) { return std::sin(r) * std::exp(-r); });
    const auto d = derivative(f);
    for (std::size_t i = 0; i < g.size(); i += 37) {
      const double r = g[i];
      EXPECT_NEAR(d[i], std::exp(-r) * (std::cos(r) - std::sin(r)), 1e-6);
    }
    for (double r : {0.013, 0.5, 1.234, 2.99}) EXPECT_NEAR(interpolate(f, r), std::sin(r) * std::exp(-r), 1e-7);
  }
}

TEST(IntegrateOnGrid, MatchesSimpsonOracle) {
  auto f = [](double r) { return r * r / std::pow(1.0 + r * r, 3.0); };
  const double ref = oracle::simpson(f, 0.0, 10.0, 200000);
  const auto g = RadialGrid::geometric(10.0, 4000, 1e-6);
  const auto v = sample(g, f);
  EXPECT_NEAR(integrate_on_grid(g, v.values), ref, 1e-8);
  const auto gu = RadialGrid::uniform(10.0, 20000);
  EXPECT_NEAR(integrate_on_grid(gu, sample(gu, f).values), ref, 1e-7);
}

TEST(PowerLawTail, ClosedFormAndDivergence) {
  EXPECT_DOUBLE_EQ(power_law_tail(2.0, 3.0, -3.0), 3.0);
  EXPECT_THROW(power_law_tail(2.0, 3.0, -1.0), QuadratureError);
  EXPECT_EQ(power_law_tail(2.0, 0.0, 5.0), 0.0);
}

// ---- quadrature -------------------------------------------------------------

TEST(IntegrateRadial, KnownIntegrals) {
  const double pi = oracle::pi();
  EXPECT_NEAR(integrate_radial([](double r) { return r * r / std::pow(1 + r * r, 3.0); }, 0.0, kInf).value, pi / 16.0,
              1e-14);
  EXPECT_NEAR(integrate_radial([](double r) { return std::exp(-r); }, 0.0, kInf).value, 1.0, 1e-14);
  EXPECT_NEAR(integrate_radial([](double r) { return 1.0 / r; }, 1.0, std::exp(3.0)).value, 3.0, 1e-13);
  EXPECT_NEAR(integrate_radial([](double r) { return std::pow(r, -0.5); }, 0.0, 4.0).value, 4.0, 1e-12);
}

TEST(IntegrateRadial, Failures) {
  EXPECT_THROW(integrate_radial([](double r) { return 1.0 / (1.0 + r); }, 0.0, kInf), QuadratureError);
  EXPECT_THROW(integrate_radial([](double) { return std::nan(""); }, 0.0, 1.0), QuadratureError);
  EXPECT_THROW(integrate_radial([](double r) { return r; }, 1.0, 0.5), DomainError);
}

TEST(IntegrateRadial, TighteningToleranceStaysWithinErrorEstimate) {
  auto g = [](double r) { return std::pow(r, 3.0) * std::pow(1.0 + std::pow(r, 3.0), -3.0); };
  for (double tol : {1e-6, 1e-8, 1e-10}) {
    QuadratureOptions a, b;
    a.rel_tol = tol;
    b.rel_tol = tol / 2.0;
    const auto ra = integrate_radial(g, 0.0, kInf, a);
    const auto rb = integrate_radial(g, 0.0, kInf, b);
    EXPECT_LE(std::abs(ra.value - rb.value), std::max(ra.error, 1e3 * tol * std::abs(ra.value)));
  }
}

// ---- decay fits -------------------------------------------------------------

TEST(DecayFit, Examples) {
  const auto g = RadialGrid::geometric(1e4, 4000, 1e-2);
  EXPECT_NEAR(decay_fit(sample(g, RadialProfile::bubble(ProblemParams::make(3, 1.0))), 1e2, 1e4), -1.0, 0.01);
  EXPECT_NEAR(decay_fit(sample(g, RadialProfile::radial_kernel(ProblemParams::make(5, 1.0))), 1e2, 1e4), -3.0, 0.03);
  EXPECT_NEAR(decay_fit(sample(g, RadialProfile::first_mode(ProblemParams::make(3, 2.0), 2)), 1e2, 1e4), -3.0, 0.03);
}

TEST(DecayFit, ExactPowerLawAndErrors) {
  const auto g = RadialGrid::geometric(1e3, 500, 1.0);
  EXPECT_NEAR(decay_fit(sample(g, [](double r) { return 7.0 * std::pow(r, -2.5); }), 2.0, 900.0), -2.5, 1e-12);
  EXPECT_THROW(decay_fit(sample(g, [](double r) { return r - 10.0; }), 2.0, 900.0), DomainError);
  EXPECT_THROW(decay_fit(sample(g, [](double) { return 0.0; }), 2.0, 900.0), DomainError);
  EXPECT_THROW(decay_fit(sample(g, [](double r) { return r; }), 5.0, 2.0), DomainError);
}

// ---- radial residual --------------------------------------------------------

TEST(ResidualRadial, BubbleIsSecondOrder) {
  const auto p = ProblemParams::make(3, 1.0);
  std::vector<double> res;
  for (std::size_t n : {1000, 2000, 4000}) {
    const auto r = residual_radial(sample(RadialGrid::geometric(50.0, n, 1e-2), RadialProfile::bubble(p)), p);
    EXPECT_GT(r.k_constant, 0.0);
    EXPECT_NEAR(r.k_constant, r.max_abs / (r.h * r.h), 1e-12 * r.k_constant);
    res.push_back(r.max_abs);
  }
  for (std::size_t i = 1; i < res.size(); ++i) {
    const double ratio = res[i - 1] / res[i];
    EXPECT_GE(ratio, 3.5);
    EXPECT_LE(ratio, 4.5);
  }
}

TEST(ResidualRadial, ScaledBubbleIsNotASolution) {
  const auto p = ProblemParams::make(3, 1.0);
  const auto g = RadialGrid::geometric(50.0, 4000, 1e-2);
  const auto exact = residual_radial(sample(g, RadialProfile::bubble(p)), p);
  const auto bumped = residual_radial(
      sample(g, [&](double r) { return 1.01 * eval_radial(RadialProfile::bubble(p), r); }), p);
  EXPECT_GT(bumped.max_abs, 10.0 * exact.max_abs);
}

TEST(ResidualRadial, TruncatedSolutionWithShiftedNonlinearity) {
  for (auto [n, a, eps] : std::vector<std::tuple<int, double, double>>{{3, 1.0, 0.1}, {4, 2.0, 0.05}}) {
    const auto p = ProblemParams::make(n, a);
    const auto term = NonlinearTerm::shifted_critical(p, eps);
    std::vector<double> res;
    for (std::size_t nodes : {1000, 2000}) {
      const auto f = sample(RadialGrid::geometric(1.0 / eps, nodes, 1e-2), RadialProfile::truncated(p, eps));
      res.push_back(residual_radial(f, n, term).max_abs);
    }
    EXPECT_LT(res[0], 1e-3);
    EXPECT_GE(res[0] / res[1], 3.5);
    EXPECT_LE(res[0] / res[1], 4.5);
    // Without the shift the same function is not a solution.
    const auto f = sample(RadialGrid::geometric(1.0 / eps, 2000, 1e-2), RadialProfile::truncated(p, eps));
    EXPECT_GT(residual_radial(f, p).max_abs, 10.0 * res[1]);
  }
}

TEST(ResidualRadial, NeedsFiveNodes) {
  const auto p = ProblemParams::make(3, 1.0);
  EXPECT_THROW(residual_radial(sample(RadialGrid::uniform(1.0, 4), RadialProfile::bubble(p)), p), DomainError);
}

// ---- bi-radial residual -----------------------------------------------------

TEST(ResidualBiradial, SecondOrderForTheExplicitFamily) {
  const auto p = ProblemParams::make(4, 2.0);
  for (double a : {0.3, 0.5, 1.0}) {
    auto u = [&](double s, double t) { return eval_nonradial_explicit(p, a, {s, t}); };
    const double coarse = residual_biradial(u, p, {0.02, 6.0}).max_abs;
    const double fine = residual_biradial(u, p, {0.01, 6.0}).max_abs;
    EXPECT_GE(coarse / fine, 3.5) << a;
    EXPECT_LE(coarse / fine, 4.5) << a;
    EXPECT_LT(fine, 1e-2);
  }
}

TEST(ResidualBiradial, PerturbationIsDetected) {
  const auto p = ProblemParams::make(4, 2.0);
  auto u = [&](double s, double t) { return eval_nonradial_explicit(p, 0.5, {s, t}); };
  auto v = [&](double s, double t) { return u(s, t) * (1.0 + 0.01 * s); };
  const double exact = residual_biradial(u, p, {0.01, 6.0}).max_abs;
  const double bumped = residual_biradial(v, p, {0.01, 6.0}).max_abs;
  EXPECT_GE(bumped, 10.0 * exact);
}

TEST(ResidualBiradial, ZeroParameterMatchesRadialResidual) {
  const auto p = ProblemParams::make(4, 2.0);
  auto u = [&](double s, double t) { return eval_nonradial_explicit(p, 0.0, {s, t}); };
  const double bi = residual_biradial(u, p, {0.01, 6.0}).max_abs;
  const double radial = residual_radial(sample(RadialGrid::uniform(6.0, 600), RadialProfile::bubble(p)), p).max_abs;
  EXPECT_GT(bi, radial / 10.0);
  EXPECT_LT(bi, radial * 10.0);
}

TEST(ResidualBiradial, Preconditions) {
  auto u = [](double, double) { return 1.0; };
  EXPECT_THROW(residual_biradial(u, ProblemParams::make(4, 1.0), {0.1, 1.0}), DomainError);
  EXPECT_THROW(residual_biradial(u, ProblemParams::make(5, 2.0), {0.1, 1.0}), DomainError);
  EXPECT_THROW(residual_biradial(u, ProblemParams::make(4, 2.0), {0.6, 1.0}), DomainError);
}

// ---- norms ------------------------------------------------------------------

TEST(WeightedSupNorm, Examples) {
  const auto g = RadialGrid::geometric(1e3, 20001, 1e-6);
  const auto u0 = sample(g, RadialProfile::bubble(ProblemParams::make(3, 0.0)));
  const auto n1 = weighted_sup_norm(u0, 1.0, 3);
  EXPECT_NEAR(n1.value, std::sqrt(2.0), 1e-7);
  EXPECT_FALSE(n1.unbounded_tail);
  const auto zero = sample(g, [](double) { return 0.0; }, TailModel::compact());
  EXPECT_EQ(weighted_sup_norm(zero, 1.0, 3).value, 0.0);
  const auto ua = sample(g, RadialProfile::bubble(ProblemParams::make(3, 1.0)));
  const auto n2 = weighted_sup_norm(ua, 3.0 - 2.0 - 0.1, 3);
  EXPECT_TRUE(std::isfinite(n2.value));
  EXPECT_TRUE(n2.in_standard_band);
}

TEST(WeightedSupNorm, BandAndUnboundedTail) {
  const auto g = RadialGrid::geometric(1e3, 2000, 1e-6);
  const auto u = sample(g, RadialProfile::bubble(ProblemParams::make(5, 1.0)));
  EXPECT_TRUE(beta_in_standard_band(5, 2.5));
  EXPECT_FALSE(beta_in_standard_band(5, 3.0));
  EXPECT_FALSE(beta_in_standard_band(5, 2.0));
  const auto r = weighted_sup_norm(u, 3.5, 5);
  EXPECT_FALSE(r.in_standard_band);
  EXPECT_TRUE(r.unbounded_tail);
  EXPECT_TRUE(std::isinf(r.value));
}

TEST(DirichletSeminorm, BubbleEnergyIdentity) {
  // For N = 3, alpha = 0: int |grad U|^2 = 3 pi^2 / 4.
  const auto g = RadialGrid::geometric(1e4, 20000, 1e-6);
  const auto u0 = sample(g, RadialProfile::bubble(ProblemParams::make(3, 0.0)));
  const double s0 = dirichlet_seminorm(u0, 3);
  EXPECT_NEAR(s0 * s0, 3.0 * oracle::pi() * oracle::pi() / 4.0, 1e-4 * s0 * s0);
  for (auto [n, a] : std::vector<std::pair<int, double>>{{3, 0.0}, {3, 1.0}, {4, 2.0}, {5, 0.5}}) {
    const auto u = sample(g, RadialProfile::bubble(ProblemParams::make(n, a)));
    const double s = dirichlet_seminorm(u, n);
    const double ref = bubble_energy_oracle(n, a);
    EXPECT_NEAR(s * s, ref, 1e-4 * ref) << n << " " << a;
  }
}

TEST(DirichletSeminorm, ZeroAndUnknownTail) {
  const auto g = RadialGrid::geometric(1e4, 20000, 1e-6);
  EXPECT_EQ(dirichlet_seminorm(sample(g, [](double) { return 0.0; }), 3), 0.0);
  const auto p = ProblemParams::make(3, 1.0);
  const auto known = sample(g, RadialProfile::bubble(p));
  const auto unknown = sample(g, [&](double r) { return eval_radial(RadialProfile::bubble(p), r); });
  EXPECT_NEAR(dirichlet_seminorm(unknown, 3), dirichlet_seminorm(known, 3), 1e-6);
}

TEST(DirichletSeminorm, TruncationsConvergeToBubble) {
  const auto p = ProblemParams::make(3, 1.0);
  const double full = dirichlet_seminorm(sample(RadialGrid::geometric(1e5, 20000, 1e-6), RadialProfile::bubble(p)), 3);
  double prev = INFINITY;
  for (double eps : {0.1, 0.01, 0.001}) {
    const auto ue = sample(RadialGrid::geometric(1.0 / eps, 20000, 1e-6), RadialProfile::truncated(p, eps));
    const double gap = std::abs(dirichlet_seminorm(ue, 3) - full);
    EXPECT_LT(gap, prev);
    prev = gap;
  }
  EXPECT_LT(prev, 1e-2 * full);
}
