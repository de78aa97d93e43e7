#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <vector>

#include "henon/closed_forms.hpp"
#include "henon/grid.hpp"

using namespace henon;

namespace {

double naive_bubble(int n, double a, double r) { return std::pow(1.0 + std::pow(r, 2.0 + a), -(n - 2.0) / (2.0 + a)); }

}  // namespace

TEST(EvalRadial, Examples) {
  const auto p = ProblemParams::make(3, 2.0);
  EXPECT_EQ(eval_radial(RadialProfile::bubble(p), 0.0), 1.0);
  for (int n : {3, 4, 7})
    for (double a : {0.0, 1.0, 2.5}) EXPECT_EQ(eval_radial(RadialProfile::radial_kernel(ProblemParams::make(n, a)), 1.0), 0.0);
  EXPECT_EQ(eval_radial(RadialProfile::truncated(ProblemParams::make(3, 1.0), 0.1), 10.0), 0.0);
}

TEST(EvalRadial, ValuesAtOrigin) {
  for (int n : {3, 5}) {
    const auto p = ProblemParams::make(n, 1.5);
    EXPECT_EQ(eval_radial(RadialProfile::bubble(p), 0.0), 1.0);
    EXPECT_EQ(eval_radial(RadialProfile::radial_kernel(p), 0.0), 1.0);
    EXPECT_EQ(eval_radial(RadialProfile::first_mode(p, 0), 0.0), 1.0);
    for (int k = 1; k < 4; ++k) EXPECT_EQ(eval_radial(RadialProfile::first_mode(p, k), 0.0), 0.0);
    EXPECT_EQ(eval_radial(RadialProfile::limit_mode(p), 0.0), 0.0);
    EXPECT_TRUE(std::isfinite(eval_radial(RadialProfile::scaled_bubble(p, 3.0), 0.0)));
  }
}

TEST(EvalRadial, AgreesWithNaiveFormulaWhereSafe) {
  for (int n : {3, 4, 6})
    for (double a : {0.0, 0.7, 2.0, 5.0}) {
      const auto p = ProblemParams::make(n, a);
      for (double r : {1e-3, 0.1, 0.5, 1.0, 2.0, 10.0, 50.0}) {
        const double u = naive_bubble(n, a, r);
        EXPECT_NEAR(eval_radial(RadialProfile::bubble(p), r), u, 1e-14 * u + 1e-300);
        const double z = (1.0 - std::pow(r, 2.0 + a)) * std::pow(1.0 + std::pow(r, 2.0 + a), -(n + a) / (2.0 + a));
        EXPECT_NEAR(eval_radial(RadialProfile::radial_kernel(p), r), z, 1e-13 * std::abs(z) + 1e-15);
        const double zl = std::pow(r, (2.0 + a) / 2.0) * std::pow(1.0 + std::pow(r, 2.0 + a), -(n + a) / (2.0 + a));
        EXPECT_NEAR(eval_radial(RadialProfile::limit_mode(p), r), zl, 1e-13 * zl);
        for (int k = 0; k < 4; ++k) {
          const double psi = std::pow(r, k) * std::pow(1.0 + std::pow(r, 2.0 + a), -(n + 2.0 * k - 2.0) / (2.0 + a));
          EXPECT_NEAR(eval_radial(RadialProfile::first_mode(p, k), r), psi, 1e-13 * psi);
        }
      }
    }
}

TEST(EvalRadial, FiniteForHugeRadii) {
  const auto p = ProblemParams::make(5, 3.0);
  for (double r : {1e6, 1e8, 1e12}) {
    const double u = eval_radial(RadialProfile::bubble(p), r);
    EXPECT_TRUE(std::isfinite(u));
    EXPECT_GT(u, 0.0);
    // Leading term r^{-(N-2)}.
    EXPECT_NEAR(u * std::pow(r, 3.0), 1.0, 1e-12);
  }
}

TEST(ScaledBubble, DilationCovariance) {
  for (int n : {3, 4})
    for (double a : {0.0, 1.0, 2.0}) {
      const auto p = ProblemParams::make(n, a);
      for (double lam : {0.5, 2.0, 7.0})
        for (double r : {0.0, 0.01, 0.3, 1.0, 4.0, 100.0}) {
          const double lhs = eval_radial(RadialProfile::scaled_bubble(p, lam), r);
          const double rhs = std::pow(lam, (n - 2.0) / 2.0) * eval_radial(RadialProfile::bubble(p), lam * r);
          EXPECT_NEAR(lhs, rhs, 1e-14 * rhs);
        }
    }
}

TEST(RadialKernel, SingleSignChangeAtOne) {
  const auto p = ProblemParams::make(4, 1.3);
  const auto f = sample(RadialGrid::geometric(1e4, 3000, 1e-4), RadialProfile::radial_kernel(p));
  int changes = 0;
  double where = 0.0;
  for (std::size_t i = 1; i < f.size(); ++i)
    if ((f.values[i] > 0) != (f.values[i - 1] > 0)) {
      ++changes;
      where = f.grid[i];
    }
  EXPECT_EQ(changes, 1);
  EXPECT_NEAR(where, 1.0, 1e-2);
  EXPECT_GT(eval_radial(RadialProfile::radial_kernel(p), 0.999), 0.0);
  EXPECT_LT(eval_radial(RadialProfile::radial_kernel(p), 1.001), 0.0);
}

TEST(RadialKernel, BoundaryValueExample) {
  // (1-4)/(1+4)^{3/2}
  EXPECT_NEAR(eval_radial(RadialProfile::radial_kernel(ProblemParams::make(3, 0.0)), 2.0), -3.0 / std::pow(5.0, 1.5),
              1e-15);
  EXPECT_NEAR(-3.0 / std::pow(5.0, 1.5), -0.26832815729997, 1e-13);
}

TEST(FirstMode, OriginAndTailExponents) {
  for (int n : {3, 4})
    for (double a : {1.0, 2.0})
      for (int k : {0, 1, 2}) {
        const auto p = ProblemParams::make(n, a);
        const auto psi = RadialProfile::first_mode(p, k);
        // psi ~ r^k at the origin
        const double r0 = 1e-4;
        EXPECT_NEAR(eval_radial(psi, r0) / std::pow(r0, k), 1.0, 1e-6);
        const auto f = sample(RadialGrid::geometric(1e4, 4000, 1e-2), psi);
        EXPECT_NEAR(decay_fit(f, 1e2, 1e4), -(n - 2.0 + k), 0.01 * (n - 2.0 + k));
        EXPECT_EQ(psi.tail_exponent(), -(n - 2.0 + k));
      }
}

TEST(LimitMode, OriginBehaviour) {
  for (double a : {0.0, 1.0, 2.0}) {
    const auto p = ProblemParams::make(3, a);
    const double r = 1e-5;
    EXPECT_NEAR(eval_radial(RadialProfile::limit_mode(p), r) / std::pow(r, (2.0 + a) / 2.0), 1.0, 1e-6);
  }
}

TEST(Truncated, VanishesOnBoundaryAndBeyond) {
  const auto p = ProblemParams::make(3, 1.0);
  for (double eps : {0.5, 0.1, 0.01}) {
    const auto u = RadialProfile::truncated(p, eps);
    EXPECT_EQ(eval_radial(u, 1.0 / eps), 0.0);
    EXPECT_EQ(eval_radial(u, 2.0 / eps), 0.0);
    EXPECT_GT(eval_radial(u, 0.5 / eps), 0.0);
    EXPECT_TRUE(u.has_compact_support());
  }
}

TEST(EvalRadial, RejectsNegativeRadius) {
  EXPECT_THROW(eval_radial(RadialProfile::bubble(ProblemParams::make(3, 1.0)), -1.0), DomainError);
  EXPECT_THROW(RadialProfile::scaled_bubble(ProblemParams::make(3, 1.0), 0.0), DomainError);
}

TEST(BubbleDerivative, MatchesCentredDifference) {
  for (double a : {0.0, 1.0, 3.0}) {
    const auto p = ProblemParams::make(4, a);
    for (double r : {0.2, 1.0, 3.0, 20.0}) {
      const double h = 1e-5 * r;
      const double fd = (naive_bubble(4, a, r + h) - naive_bubble(4, a, r - h)) / (2.0 * h);
      EXPECT_NEAR(bubble_derivative(p, r), fd, 1e-8 * std::abs(fd));
    }
  }
}

TEST(NonradialExplicit, Examples) {
  const auto p = ProblemParams::make(4, 2.0);
  EXPECT_NEAR(eval_nonradial_explicit(p, 0.5, {1.0, 0.0}), 1.0 / std::sqrt(1.25), 1e-15);
  EXPECT_NEAR(eval_nonradial_explicit(p, 0.5, {1.0, 0.0}), 0.894427191, 1e-9);
  EXPECT_NEAR(eval_nonradial_explicit(p, 0.5, {0.0, 1.0}), 1.0 / std::sqrt(3.25), 1e-15);
  EXPECT_NEAR(eval_nonradial_explicit(p, 0.5, {0.0, 1.0}), 0.554700196, 1e-9);
}

TEST(NonradialExplicit, ReducesToBubbleAtZero) {
  for (int n : {4, 6, 8}) {
    const auto p = ProblemParams::make(n, 2.0);
    for (double s : {0.0, 0.3, 1.0, 2.5})
      for (double t : {0.0, 0.7, 3.0})
        EXPECT_NEAR(eval_nonradial_explicit(p, 0.0, {s, t}), eval_radial(RadialProfile::bubble(p), std::hypot(s, t)),
                    1e-14);
  }
}

TEST(NonradialExplicit, NotConstantOnSpheres) {
  const auto p = ProblemParams::make(4, 2.0);
  double lo = INFINITY, hi = -INFINITY;
  for (int i = 0; i <= 16; ++i) {
    const double th = i * std::acos(-1.0) / 32.0;
    const double v = eval_nonradial_explicit(p, 0.5, {std::cos(th), std::sin(th)});
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  EXPECT_GT(hi - lo, 1e-6);
}

TEST(NonradialExplicit, CartesianWrapperAndGuards) {
  const auto p = ProblemParams::make(4, 2.0);
  const std::array<double, 4> x{0.6, 0.8, 0.0, 0.5};
  EXPECT_DOUBLE_EQ(eval_nonradial_cartesian(p, 0.3, x), eval_nonradial_explicit(p, 0.3, {1.0, 0.5}));
  EXPECT_THROW(eval_nonradial_explicit(ProblemParams::make(4, 1.0), 0.3, {1.0, 0.5}), DomainError);
  EXPECT_THROW(eval_nonradial_explicit(ProblemParams::make(5, 2.0), 0.3, {1.0, 0.5}), DomainError);
  EXPECT_THROW(eval_nonradial_explicit(p, 0.3, {-1.0, 0.5}), DomainError);
  // The base 1 + |x|^4 - 2aY + a^2 stays >= 1 > 0 for every real a.
  for (double a : {-5.0, -1.0, 1.0, 5.0, 100.0})
    for (double s : {0.0, 0.5, 1.0, 3.0})
      for (double t : {0.0, 0.5, 2.0}) EXPECT_GT(eval_nonradial_explicit(p, a, {s, t}), 0.0);
}

TEST(GradientCondition, Examples) {
  const auto p = ProblemParams::make(4, 2.0);
  const std::vector<BiRadialPoint> pts{{0.0, 0.0}, {1.0, 0.0}, {3.0, 4.0}};
  const auto rep = check_harmonic_gradient_condition(p, pts);
  ASSERT_EQ(rep.samples.size(), 3u);
  EXPECT_EQ(rep.samples[0].gradient_norm_sq, 0.0);
  EXPECT_EQ(rep.samples[0].weight_term, 0.0);
  EXPECT_DOUBLE_EQ(rep.samples[1].gradient_norm_sq, 4.0);
  EXPECT_DOUBLE_EQ(rep.samples[1].weight_term, 4.0);
  EXPECT_DOUBLE_EQ(rep.samples[2].gradient_norm_sq, 100.0);
  EXPECT_NEAR(rep.samples[2].weight_term, 100.0, 1e-12);
  EXPECT_LE(rep.max_abs_deviation, 1e-12);
}

TEST(GradientCondition, HoldsToRoundingOnAGrid) {
  for (int n : {4, 6, 10}) {
    std::vector<BiRadialPoint> pts;
    for (int i = 0; i < 20; ++i)
      for (int j = 0; j < 20; ++j) pts.push_back({0.37 * i, 0.23 * j});
    const auto rep = check_harmonic_gradient_condition(ProblemParams::make(n, 2.0), pts);
    for (const auto& s : rep.samples)
      EXPECT_LE(std::abs(s.gradient_norm_sq - s.weight_term), 1e-13 * std::max(1.0, s.weight_term));
  }
}
