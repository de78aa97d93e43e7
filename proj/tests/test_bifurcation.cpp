#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "henon/bifurcation.hpp"

using namespace henon;

TEST(FindAlphaK, Examples) {
  const auto b2 = find_alpha_k(3, 2, 1.0 / 200.0);
  EXPECT_NEAR(b2.alpha_root, 2.0, 0.04);
  EXPECT_LE(b2.limit_gap, 0.04);
  EXPECT_DOUBLE_EQ(b2.radius(), 200.0);
  const auto b3 = find_alpha_k(3, 3, 1.0 / 200.0);
  EXPECT_NEAR(b3.alpha_root, 4.0, 0.08);
}

TEST(FindAlphaK, RecordInvariants) {
  for (int n : {3, 4})
    for (int k : {2, 3}) {
      const auto b = find_alpha_k(n, k, 0.01);
      EXPECT_LE(std::abs(b.residual), 1e-6);
      EXPECT_GT(b.alpha_root, 0.0);
      EXPECT_GT(b.alpha_root, b.bracket_lo);
      EXPECT_LT(b.alpha_root, b.bracket_hi);
      EXPECT_TRUE(b.monotone_on_bracket);
      EXPECT_DOUBLE_EQ(b.limit_gap, std::abs(b.alpha_root - 2.0 * (k - 1)));
      EXPECT_NEAR(bifurcation_residual(n, k, 100.0, b.alpha_root), b.residual, 1e-12);
      // Secant slope over the symmetric bracket approximates -(N+alpha_k)/2.
      const double target = -(n + 2.0 * (k - 1)) / 2.0;
      EXPECT_NEAR(b.slope, target, 0.1 * std::abs(target));
      EXPECT_GT(b.evaluations, b.iterations);
    }
}

TEST(FindAlphaK, LimitGapShrinksWithRadius) {
  // Single-grid eigenvalues carry a discretisation bias of ~1e-6 in alpha that
  // grows slightly with R; the two-grid values isolate the truncation error.
  RootOptions opts;
  opts.richardson = true;
  for (int n : {3, 4})
    for (int k : {2, 3}) {
      double prev = INFINITY;
      for (double r : {50.0, 100.0, 200.0, 400.0}) {
        const auto b = find_alpha_k(n, k, 1.0 / r, {}, opts);
        EXPECT_LE(b.limit_gap, prev + opts.alpha_tol) << n << " " << k << " " << r;
        prev = b.limit_gap;
      }
    }
}

TEST(FindAlphaK, DistinctModesGiveDistinctRoots) {
  std::vector<double> roots;
  for (int k = 2; k <= 5; ++k) roots.push_back(find_alpha_k(4, k, 0.01).alpha_root);
  for (std::size_t i = 1; i < roots.size(); ++i) EXPECT_GT(roots[i] - roots[i - 1], 1.0);
}

TEST(FindAlphaK, BracketHandling) {
  // A bracket that misses the root is expanded.
  const auto b = find_alpha_k(3, 2, 0.01, std::make_pair(0.0, 0.5));
  EXPECT_NEAR(b.alpha_root, 2.0, 0.04);
  EXPECT_THROW(find_alpha_k(3, 40, 0.01), NoSignChangeError);
  EXPECT_THROW(find_alpha_k(3, 2, 0.01, std::make_pair(1.0, 0.5)), DomainError);
  EXPECT_THROW(find_alpha_k(3, 0, 0.01), DomainError);
  EXPECT_THROW(find_alpha_k(3, 2, 1.5), DomainError);
}

TEST(BranchLabels, Examples) {
  EXPECT_EQ(branch_labels(3, 2), std::vector<std::string>{"O(2)xO(1)"});
  EXPECT_EQ(branch_labels(3, 3), std::vector<std::string>{"O(2)"});
  EXPECT_EQ(branch_labels(3, 4).size(), 1u);
  EXPECT_EQ(branch_labels(4, 2), (std::vector<std::string>{"O(3)xO(1)", "O(2)xO(2)"}));
  EXPECT_EQ(branch_labels(5, 3), std::vector<std::string>{"O(4)"});
  for (int n = 3; n <= 10; ++n) {
    EXPECT_EQ(branch_labels(n, 2).size(), static_cast<std::size_t>(n / 2));
    EXPECT_EQ(branch_labels(n, 5).size(), 1u);
  }
}

TEST(BifurcationDiagram, RowsForThreeDimensions) {
  const auto rows = bifurcation_diagram(3, 4, {0.01});
  ASSERT_EQ(rows.size(), 3u);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    EXPECT_EQ(rows[i].point.k, static_cast<int>(i) + 2);
    EXPECT_NEAR(rows[i].point.alpha_root, 2.0 * (i + 1), 0.1);
    EXPECT_EQ(rows[i].branches.size(), 1u);
    EXPECT_TRUE(rows[i].conjectured_vertical);
  }
  EXPECT_THROW(bifurcation_diagram(3, 1, {0.01}), DomainError);
}

TEST(MorseJumpTable, ThreeDimensions) {
  std::vector<double> grid;
  for (int i = 0; i <= 13; ++i) grid.push_back(0.5 * i);
  const auto t = morse_jump_table(3, grid);
  EXPECT_TRUE(t.non_decreasing);
  EXPECT_TRUE(t.jumps_at_even_integers);
  // The grid starts at alpha = 0, where the k = 1 mode enters the index.
  std::vector<double> where;
  std::vector<std::int64_t> size;
  for (const auto& j : t.jumps) {
    EXPECT_TRUE(j.matches);
    where.push_back(j.alpha_location);
    size.push_back(j.observed_size);
    EXPECT_EQ(j.expected_size, harmonic_multiplicity(3, j.k));
  }
  EXPECT_EQ(where, (std::vector<double>{0.0, 2.0, 4.0, 6.0}));
  EXPECT_EQ(size, (std::vector<std::int64_t>{3, 5, 7, 9}));
}

TEST(MorseJumpTable, FourDimensionsAndValidation) {
  const auto t = morse_jump_table(4, {1.0, 1.5, 2.5, 3.0});
  ASSERT_EQ(t.jumps.size(), 1u);
  EXPECT_EQ(t.jumps[0].alpha_location, 2.0);
  EXPECT_EQ(t.jumps[0].observed_size, 9);
  EXPECT_THROW(morse_jump_table(4, {1.0}), DomainError);
  EXPECT_THROW(morse_jump_table(4, {1.0, 1.0}), DomainError);
}

TEST(MorseJumpTable, NonDecreasingOverLongSweeps) {
  for (int n = 3; n <= 8; ++n) {
    std::vector<double> grid;
    for (int i = 0; i <= 200; ++i) grid.push_back(0.13 * i);
    const auto t = morse_jump_table(n, grid);
    EXPECT_TRUE(t.non_decreasing);
    EXPECT_TRUE(t.jumps_at_even_integers);
    for (std::size_t i = 1; i < t.morse.size(); ++i) EXPECT_GE(t.morse[i], t.morse[i - 1]);
  }
}
