#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "dense.hpp"
#include "qmg/classical/compress.hpp"
#include "qmg/classical/multigrid.hpp"

using namespace qmg::classical;
using qmg::fixed::DataWord;
using qmg::fixed::FixedPointFormat;

namespace {

RealVector random_vector(std::size_t n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  RealVector v(n);
  for (auto& x : v) x = d(rng);
  return v;
}

std::vector<std::vector<double>> dense_level_matrix(const Level& lv) {
  const double hh = std::ldexp(1.0, 2 * lv.h_exp);
  auto a = qmg::testing::dense_tridiag(lv.size, 1.0 / hh, -2.0 / hh, 1.0 / hh);
  a[0][0] = lv.row(0).diag / hh;
  return a;
}

RealVector matvec(const std::vector<std::vector<double>>& a, const RealVector& x) {
  RealVector y(x.size(), 0.0);
  for (std::size_t i = 0; i < x.size(); ++i) {
    for (std::size_t j = 0; j < x.size(); ++j) y[i] += a[i][j] * x[j];
  }
  return y;
}

// boundary contribution of the ghosts moved to the right-hand side
RealVector ghost_term(const Level& lv) {
  const double hh = std::ldexp(1.0, 2 * lv.h_exp);
  RealVector g(lv.size, 0.0);
  g.front() += lv.ghosts.left / hh;
  g.back() += lv.ghosts.right / hh;
  return g;
}

const FixedPointFormat k8fb6{8, 6};

}  // namespace

TEST(Jacobi, FourPointExample) {
  const auto p = GridProblem::rod(2, 0, {1.0, 1.0});
  const auto u1 = jacobi_step(p, RealVector(4, 0.0));
  EXPECT_EQ(u1, (RealVector{0.5, 0.0, 0.0, 0.5}));
  EXPECT_EQ(jacobi_step(p, RealVector(4, 1.0)), RealVector(4, 1.0));
}

TEST(Jacobi, ErrorPropagationMatchesDenseIterationMatrix) {
  std::mt19937_64 rng(1);
  const auto p = GridProblem::custom(3, -1, random_vector(8, rng), {0.3, -0.7});
  const Level lv = build_hierarchy(p, 1).front();
  const auto a = dense_level_matrix(lv);
  RealVector b = p.rhs;
  const auto g = ghost_term(lv);
  for (std::size_t i = 0; i < 8; ++i) b[i] -= g[i];
  const auto exact = qmg::testing::dense_solve(a, b);
  for (int t = 0; t < 10; ++t) {
    const auto u = random_vector(8, rng);
    RealVector e(8);
    for (std::size_t i = 0; i < 8; ++i) e[i] = u[i] - exact[i];
    const auto ae = matvec(a, e);
    const auto u1 = jacobi_step(p, u);
    for (std::size_t i = 0; i < 8; ++i) EXPECT_NEAR(u1[i] - exact[i], e[i] - ae[i] / a[i][i], 1e-12);
  }
}

TEST(Jacobi, WeightedLimitsAndHighFrequencyDamping) {
  std::mt19937_64 rng(2);
  const auto p = GridProblem::zero(4, 0);
  const Level lv = build_hierarchy(p, 1).front();
  const auto u = random_vector(16, rng);
  EXPECT_EQ(weighted_jacobi_step(lv, p.rhs, u, 1.0), jacobi_step(lv, p.rhs, u));
  EXPECT_EQ(weighted_jacobi_step(lv, p.rhs, u, 0.0), u);
  // highest Dirichlet mode k = N: eigenvalue 1 - omega (1 - cos(pi N/(N+1)))
  RealVector mode(16);
  for (std::size_t i = 0; i < 16; ++i) mode[i] = std::sin(std::numbers::pi * 16 * (i + 1) / 17.0);
  const double omega = 2.0 / 3.0;
  const auto out = weighted_jacobi_step(lv, p.rhs, mode, omega);
  const double lambda = 1.0 - omega * (1.0 - std::cos(std::numbers::pi * 16 / 17.0));
  for (std::size_t i = 0; i < 16; ++i) EXPECT_NEAR(out[i], lambda * mode[i], 1e-12);
  EXPECT_NEAR(std::abs(lambda), std::abs(1.0 - 2.0 * omega), 0.02);
}

TEST(Residual, ExactZeroAndDenseMatvec) {
  std::mt19937_64 rng(3);
  const auto p = GridProblem::custom(3, 1, random_vector(8, rng), {0.25, 1.5});
  const Level lv = build_hierarchy(p, 1).front();
  const auto a = dense_level_matrix(lv);
  EXPECT_EQ(residual(GridProblem::custom(3, 1, p.rhs, {}), RealVector(8, 0.0)), p.rhs);
  const auto g = ghost_term(lv);
  RealVector b = p.rhs;
  for (std::size_t i = 0; i < 8; ++i) b[i] -= g[i];
  const auto exact = qmg::testing::dense_solve(a, b);
  EXPECT_LT(linf_norm(residual(p, exact)), 1e-12);
  const auto u = random_vector(8, rng);
  const auto au = matvec(a, u);
  const auto r = residual(p, u);
  for (std::size_t i = 0; i < 8; ++i) EXPECT_NEAR(r[i], p.rhs[i] - au[i] - g[i], 1e-12);
}

TEST(Transfer, RestrictionExamples) {
  RealVector lin(8);
  for (std::size_t i = 0; i < 8; ++i) lin[i] = double(i);
  const auto c = restrict_full_weighting(lin);
  for (std::size_t j = 1; j < 4; ++j) EXPECT_DOUBLE_EQ(c[j], 2.0 * j);
  EXPECT_DOUBLE_EQ(restrict_full_weighting(RealVector{0, 0, 4, 0, 0, 0, 0, 0})[1], 2.0);
  const auto k = restrict_full_weighting(RealVector(8, 3.0));
  for (std::size_t j = 1; j < 4; ++j) EXPECT_DOUBLE_EQ(k[j], 3.0);
  EXPECT_THROW(restrict_full_weighting(RealVector(5, 0.0)), std::invalid_argument);
  EXPECT_THROW(restrict_full_weighting(RealVector(2, 0.0)), std::invalid_argument);
}

TEST(Transfer, InterpolationExamples) {
  const auto f = interpolate_linear(RealVector{0, 2, 4, 6});
  for (std::size_t i = 0; i + 1 < f.size(); ++i) EXPECT_DOUBLE_EQ(f[i], double(i));
  const auto k = interpolate_linear(RealVector(4, 1.5));
  for (std::size_t i = 0; i + 1 < k.size(); ++i) EXPECT_DOUBLE_EQ(k[i], 1.5);
  // restriction of interpolated affine data, interior coarse points
  RealVector affine{1, 3, 5, 7, 9, 11, 13, 15};
  const auto back = restrict_full_weighting(interpolate_linear(affine));
  for (std::size_t j = 1; j + 1 < affine.size(); ++j) EXPECT_DOUBLE_EQ(back[j], affine[j]);
}

TEST(Hierarchy, CoarseOperatorsAreGalerkinProducts) {
  const std::size_t n = 32;
  const auto p = GridProblem::zero(5, 0);
  const auto levels = build_hierarchy(p, 5);
  auto a = dense_level_matrix(levels[0]);
  for (std::size_t l = 1; l < levels.size(); ++l) {
    const std::size_t nf = n >> (l - 1);
    const std::size_t nc = nf / 2;
    std::vector<std::vector<double>> P(nf, std::vector<double>(nc, 0.0));
    for (std::size_t i = 0; i < nc; ++i) {
      P[2 * i][i] = 1.0;
      P[2 * i + 1][i] += 0.5;
      if (i + 1 < nc) P[2 * i + 1][i + 1] += 0.5;
    }
    std::vector<std::vector<double>> rap(nc, std::vector<double>(nc, 0.0));
    for (std::size_t i = 0; i < nc; ++i) {
      for (std::size_t j = 0; j < nc; ++j) {
        for (std::size_t x = 0; x < nf; ++x) {
          for (std::size_t y = 0; y < nf; ++y) rap[i][j] += 0.5 * P[x][i] * a[x][y] * P[y][j];
        }
      }
    }
    const auto closed = dense_level_matrix(levels[l]);
    for (std::size_t i = 0; i < nc; ++i) {
      for (std::size_t j = 0; j < nc; ++j) EXPECT_NEAR(rap[i][j], closed[i][j], 1e-12) << l << " " << i << " " << j;
    }
    a = rap;
  }
}

TEST(CoarseSolve, ThomasMatchesHandElimination) {
  // 2x2: (-2 x0 + x1) = f0 h^2 - L, (x0 - 2 x1) = f1 h^2 - R, h = 1
  const auto p = GridProblem::custom(1, 0, {1.0, 2.0}, {0.5, -1.0});
  const Level lv = build_hierarchy(p, 1).front();
  const auto x = exact_coarse_solve(lv, p.rhs);
  const double b0 = 1.0 - 0.5, b1 = 2.0 + 1.0;
  EXPECT_NEAR(x[0], (-2 * b0 - b1) / 3.0, 1e-15);
  EXPECT_NEAR(x[1], (-b0 - 2 * b1) / 3.0, 1e-15);
  EXPECT_LT(linf_norm(residual(p, x)), 1e-12);
  const auto q = GridProblem::rod(2, 0, {1.0, 1.0});
  const auto ones = exact_coarse_solve(build_hierarchy(q, 1).front(), q.rhs);
  for (double v : ones) EXPECT_NEAR(v, 1.0, 1e-14);
}

TEST(CoarseSolve, FixedIteratesToStationarity) {
  const auto p = GridProblem::rod(1, 0);
  const auto fp = encode_problem(p, k8fb6);
  const Level lv = build_hierarchy(p, 1).front();
  const auto s = fixed_coarse_solve(lv, {fp.ghost_left, fp.ghost_right}, fp.rhs, WordVector(2, DataWord{0, k8fb6}), 32);
  EXPECT_LE(s.sweeps, 32u);
  EXPECT_EQ(jacobi_step(lv, {fp.ghost_left, fp.ghost_right}, fp.rhs, s.u), s.u);
  // exact solution 5/6 and 2/3 within a few units of the last place
  EXPECT_NEAR(decode(s.u)[0], 5.0 / 6.0, 3.0 / 64);
  EXPECT_NEAR(decode(s.u)[1], 2.0 / 3.0, 3.0 / 64);
}

TEST(CoarseSolve, RoundingTwoCycleStopsAtCap) {
  // coarse level-1 rows (-3, 1), (1, -2); rounding alternates (18,-12) and (19,-13)
  const auto p = GridProblem::zero(2, 0);
  const Level lv = build_hierarchy(p, 2)[1];
  const DataWord z = DataWord::from_raw(0, k8fb6);
  const WordVector f{DataWord::from_raw(-17, k8fb6), DataWord::from_raw(11, k8fb6)};
  const auto s = fixed_coarse_solve(lv, {z, z}, f, WordVector(2, z), 32);
  EXPECT_FALSE(s.stationary);
  EXPECT_EQ(s.sweeps, 32u);
  WordVector u(2, z);
  for (int t = 0; t < 32; ++t) u = jacobi_step(lv, {z, z}, f, u);
  EXPECT_EQ(s.u, u);
  const auto next = jacobi_step(lv, {z, z}, f, u);
  EXPECT_NE(next, u);
  EXPECT_EQ(jacobi_step(lv, {z, z}, f, next), u);
}

TEST(CoarseSolve, StationaryStopEqualsCapSweeps) {
  std::mt19937_64 rng(9);
  std::uniform_int_distribution<std::int64_t> raw(-32, 32);
  const auto p = GridProblem::zero(3, 0);
  const Level lv = build_hierarchy(p, 2)[1];
  const DataWord z = DataWord::from_raw(0, k8fb6);
  for (int t = 0; t < 100; ++t) {
    WordVector f;
    for (std::size_t i = 0; i < lv.size; ++i) f.push_back(DataWord::from_raw(raw(rng) / 4, k8fb6));
    const auto s = fixed_coarse_solve(lv, {z, z}, f, WordVector(lv.size, z), 40);
    WordVector u(lv.size, z);
    for (int k = 0; k < 40; ++k) u = jacobi_step(lv, {z, z}, f, u);
    EXPECT_EQ(s.u, u) << t;
  }
}

TEST(FixedKernels, MatchRealKernelsWithinRounding) {
  std::mt19937_64 rng(4);
  std::uniform_int_distribution<std::int64_t> raw(-40, 40);
  for (int dx_exp : {-2, -1, 0, 1}) {
    for (int t = 0; t < 200; ++t) {
      const auto w = [&] { return DataWord::from_raw(raw(rng), k8fb6); };
      const auto f = w(), l = w(), u = w(), r = w();
      for (std::int64_t diag : {-2, -3, -5}) {
        const StencilRow row{1, diag, 1, dx_exp};
        const double hh = std::ldexp(1.0, 2 * dx_exp);
        const double j = (f.value() * hh - l.value() - r.value()) / diag;
        const double res = f.value() - (l.value() + diag * u.value() + r.value()) / hh;
        if (std::abs(j) < 1.9) EXPECT_LE(std::abs(jacobi_point(row, f, l, r).value() - j), 1.0 / 128);
        if (std::abs(res) < 1.9) EXPECT_LE(std::abs(residual_point(row, f, l, u, r).value() - res), 1.0 / 128);
      }
      EXPECT_LE(std::abs(restrict_point(l, u, r).value() - (l.value() + 2 * u.value() + r.value()) / 4), 1.0 / 128);
      EXPECT_LE(std::abs(midpoint(l, r).value() - (l.value() + r.value()) / 2), 1.0 / 128);
    }
  }
  // ties go to even
  EXPECT_EQ(midpoint(DataWord::from_raw(1, k8fb6), DataWord::from_raw(0, k8fb6)).raw(), 0);
  EXPECT_EQ(midpoint(DataWord::from_raw(3, k8fb6), DataWord::from_raw(0, k8fb6)).raw(), 2);
}

TEST(FixedKernels, NoIntermediateOverflow) {
  // L + R = 2.0 is outside fixed8.6, the quotient is not
  const auto one = qmg::fixed::encode_fixed(1.0, k8fb6);
  const auto zero = DataWord{0, k8fb6};
  EXPECT_EQ(jacobi_point(StencilRow{}, zero, one, one), one);
}

TEST(VCycle, ExactSolutionIsFixedPoint) {
  const auto p = GridProblem::rod(5, -5);
  const auto exact = exact_coarse_solve(build_hierarchy(p, 1).front(), p.rhs);
  VCycleConfig cfg;
  cfg.levels = 4;
  const auto u = v_cycle(p, exact, cfg);
  for (std::size_t i = 0; i < u.size(); ++i) EXPECT_NEAR(u[i], exact[i], 1e-12);
}

TEST(VCycle, ContractsRandomStart) {
  std::mt19937_64 rng(5);
  const auto p = GridProblem::zero(6, 0);
  VCycleConfig cfg;
  cfg.levels = 5;
  const auto u0 = random_vector(64, rng);
  const auto u1 = v_cycle(p, u0, cfg);
  EXPECT_LE(linf_norm(residual(p, u1)) / linf_norm(residual(p, u0)), 0.2);
}

TEST(VCycle, DecomposesIntoItsParts) {
  std::mt19937_64 rng(6);
  const auto p = GridProblem::custom(4, 0, random_vector(16, rng), {0.5, 0.25});
  VCycleConfig cfg;
  cfg.levels = 2;
  cfg.s0 = 1;
  cfg.s1 = 1;
  const auto u0 = random_vector(16, rng);
  const auto levels = build_hierarchy(p, 2);
  auto u = weighted_jacobi_step(levels[0], p.rhs, u0, cfg.omega);
  const auto ec = exact_coarse_solve(levels[1], restrict_full_weighting(residual(levels[0], p.rhs, u)));
  const auto e = interpolate_linear(ec);
  for (std::size_t i = 0; i < 16; ++i) u[i] += e[i];
  u = weighted_jacobi_step(levels[0], p.rhs, u, cfg.omega);
  EXPECT_EQ(v_cycle(p, u0, cfg), u);
}

TEST(VCycle, FixedModeValidationAndZeroProblem) {
  const auto p = GridProblem::zero(3, 0);
  VCycleConfig cfg;
  cfg.mode = Arithmetic::kFixed;
  EXPECT_THROW(cfg.validate(p), std::invalid_argument);
  cfg.omega = 1.0;
  cfg.s0 = cfg.s1 = 1;
  const WordVector zero(8, DataWord{0, k8fb6});
  EXPECT_EQ(v_cycle(p, zero, cfg), zero);
  cfg.levels = 4;
  EXPECT_THROW(cfg.validate(p), std::invalid_argument);
}

TEST(Solve, ZeroCyclesWhenAlreadyConverged) {
  const auto p = GridProblem::zero(4, 0);
  const auto r = solve_to_tolerance(p, VCycleConfig{}, 1.0, RealVector(16, 0.0));
  EXPECT_EQ(r.cycles, 0u);
  EXPECT_TRUE(r.converged);
}

TEST(Solve, CycleCountConsistentWithContraction) {
  std::mt19937_64 rng(7);
  const auto p = GridProblem::zero(8, 0);
  VCycleConfig cfg;
  cfg.levels = 7;
  const auto r = solve_to_tolerance(p, cfg, 1e-8, random_vector(256, rng));
  ASSERT_TRUE(r.converged);
  double log_rho = 0.0;
  for (std::size_t c = 1; c < r.history.size(); ++c) log_rho += std::log(r.history[c].contraction);
  log_rho /= double(r.history.size() - 1);
  const double predicted = std::log(1e-8 / r.history[0].linf_residual) / log_rho;
  EXPECT_NEAR(double(r.cycles), predicted, 2.0);
  EXPECT_EQ(history_csv({}), "cycle,linf_residual,l2_residual,contraction_factor\n");
}

TEST(Compression, FullBasisAndPureMode) {
  std::mt19937_64 rng(8);
  const auto v = random_vector(32, rng);
  EXPECT_LT(compressibility_probe(v).max_error.back(), 1e-12);
  RealVector s(64);
  for (std::size_t i = 0; i < 64; ++i) s[i] = std::sin(2 * std::numbers::pi * 3 * i / 64.0);
  const auto c = compressibility_probe(s);
  EXPECT_LT(c.max_error[2], 1e-12);
  for (std::size_t m = 1; m < c.max_error.size(); ++m) EXPECT_LE(c.max_error[m], c.max_error[m - 1] + 1e-12);
}
