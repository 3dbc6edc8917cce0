#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "qmg/classical/study.hpp"

namespace {

using namespace qmg::classical;

TEST(Study, LineFitExactAndNoisy) {
  const auto f = fit_line({1, 2, 3, 4}, {3, 5, 7, 9});
  EXPECT_NEAR(f.slope, 2.0, 1e-14);
  EXPECT_NEAR(f.intercept, 1.0, 1e-14);
  EXPECT_NEAR(f.r_squared, 1.0, 1e-14);
  // counts 5, 9, 12 at x = 4, 8, 12: residuals 1/6, -1/3, 1/6
  const auto g = fit_line({4, 8, 12}, {5, 9, 12});
  EXPECT_NEAR(g.slope, 0.875, 1e-14);
  EXPECT_NEAR(g.r_squared, 1.0 - (1.0 / 6) / (74.0 / 3), 1e-12);
  EXPECT_THROW(fit_line({1, 1}, {2, 3}), std::invalid_argument);
  EXPECT_THROW(fit_line({1}, {2}), std::invalid_argument);
}

TEST(Study, MaxContractionSkipsInitialRow) {
  std::vector<HistoryRow> h{{0, 1.0, 1.0, 0.0}, {1, 0.1, 0.1, 0.1}, {2, 0.03, 0.03, 0.3}};
  EXPECT_DOUBLE_EQ(max_contraction(h), 0.3);
  EXPECT_DOUBLE_EQ(max_contraction({}), 0.0);
}

TEST(Study, RandomGuessIsSeededAndBounded) {
  std::mt19937_64 a(3), b(3);
  const auto x = random_guess(64, a, 0.5);
  EXPECT_EQ(x, random_guess(64, b, 0.5));
  for (double v : x) {
    EXPECT_GE(v, -0.5);
    EXPECT_LE(v, 0.5);
  }
}

TEST(Study, SmallConvergenceStudy) {
  VCycleConfig cfg;
  cfg.levels = 0;
  const auto s = convergence_study(6, 0, cfg, {1e-4, 1e-8, 1e-12}, 4, 7, 5);
  EXPECT_TRUE(s.converged);
  EXPECT_LE(s.max_contraction, 0.2);
  ASSERT_EQ(s.cycles.size(), 3u);
  EXPECT_LT(s.cycles[0], s.cycles[1]);
  EXPECT_LT(s.cycles[1], s.cycles[2]);
  EXPECT_EQ(s.scaling.size(), 4u);
  EXPECT_LT(s.scaling_ratio, 2.0);
  EXPECT_EQ(s.history.front().cycle, 0u);
}

TEST(Study, SineSolutionCompresses) {
  const auto r = probe_solution(GridProblem::sine(8, -8), 0.1);
  EXPECT_TRUE(r.monotone);
  EXPECT_EQ(r.mode_budget, 25u);
  EXPECT_LT(r.error_at_budget, 1e-3);
  EXPECT_LT(r.curve.max_error.back(), 1e-12);
}

TEST(Study, SineRhsIsDirichletMode) {
  const auto p = GridProblem::sine(3, 0, 2);
  // one full period over ghost-to-ghost: antisymmetric about the midpoint
  for (std::size_t i = 0; i < 8; ++i) EXPECT_NEAR(p.rhs[i], -p.rhs[7 - i], 1e-15);
  EXPECT_NEAR(p.rhs[0], std::sin(2 * std::numbers::pi / 9), 1e-15);
}

}  // namespace
