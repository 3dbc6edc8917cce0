#include <gtest/gtest.h>

#include <map>
#include <random>

#include "qmg/multigrid/quantum_multigrid.hpp"

namespace {

using namespace qmg;
using classical::GridProblem;
using classical::WordVector;
using fixed::DataWord;
using fixed::FixedPointFormat;
using multigrid::QuantumVCycleConfig;

FixedPointFormat fmt8() { return {8, 6}; }

WordVector words(const std::vector<double>& v, const FixedPointFormat& f) { return classical::encode(v, f); }

WordVector random_words(std::size_t n, const FixedPointFormat& f, std::mt19937_64& rng) {
  std::uniform_int_distribution<std::int64_t> d(f.min_raw() / 4, f.max_raw() / 4);
  WordVector out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(DataWord::from_raw(d(rng), f));
  return out;
}

std::vector<std::int64_t> raws(const WordVector& w) {
  std::vector<std::int64_t> out;
  for (const auto& x : w) out.push_back(x.raw());
  return out;
}

TEST(QuantumMultigrid, LevelMapStrides) {
  const auto p = GridProblem::rod(3, 0);
  QuantumVCycleConfig cfg;
  cfg.levels = 3;
  const auto s = multigrid::prepare_vcycle_state(p, WordVector(8, DataWord::from_raw(0, cfg.format)), cfg);
  ASSERT_EQ(s.maps.size(), 3u);
  EXPECT_EQ(s.maps[2].stride, 4u);
  EXPECT_EQ(s.maps[2].points, 2u);
  EXPECT_TRUE(s.maps[1].active(6));
  EXPECT_FALSE(s.maps[1].active(5));
  EXPECT_EQ(s.maps[2].local(4), 1u);
}

TEST(QuantumMultigrid, StrideTwoSmoothingMatchesCoarseJacobi) {
  // a level-1 step only reads and writes even branches
  const auto p = GridProblem::zero(3, 0);
  QuantumVCycleConfig cfg;
  cfg.levels = 2;
  auto s = multigrid::prepare_vcycle_state(p, WordVector(8, DataWord::from_raw(0, cfg.format)), cfg);
  const WordVector r = words({0, 0, 0.5, 0.25, 1.0, 0, -0.5, 0}, cfg.format);
  // seed level 1 through a restriction of a chosen residual
  const auto idx = s.pipeline.index();
  const auto reg = s.pipeline.allocate("rseed");
  s.pipeline.xor_kernel(reg, [&](const sim::BasisLabel& l) { return std::uint64_t{r[l.field(idx.offset, idx.width)].bits}; });
  multigrid::quantum_restrict(s, 0, reg);
  multigrid::quantum_smooth(s, 1, 1);

  const auto fc = classical::restrict_full_weighting(r);
  const auto lv = classical::build_hierarchy(p, 2)[1];
  const DataWord z = DataWord::from_raw(0, cfg.format);
  const auto expect = classical::jacobi_step(lv, {z, z}, fc, WordVector(4, z));
  const auto got = s.pipeline.decode(s.u[1]);
  for (std::size_t j = 0; j < 4; ++j) EXPECT_EQ(got[2 * j].raw(), expect[j].raw()) << j;
  for (std::size_t j = 0; j < 4; ++j) EXPECT_EQ(got[2 * j + 1].raw(), 0) << "odd branch " << j;
}

TEST(QuantumMultigrid, RestrictExample) {
  // residual (0, 0, 4, 0, ...) sends 2 to coarse point 1
  const auto p = GridProblem::zero(3, 0);
  QuantumVCycleConfig cfg;
  cfg.levels = 2;
  cfg.format = {8, 3};
  auto s = multigrid::prepare_vcycle_state(p, WordVector(8, DataWord::from_raw(0, cfg.format)), cfg);
  const auto idx = s.pipeline.index();
  const auto reg = s.pipeline.allocate("rseed");
  const auto four = fixed::encode_fixed(4.0, cfg.format);
  s.pipeline.xor_kernel(reg, [&](const sim::BasisLabel& l) { return l.field(idx.offset, idx.width) == 2 ? std::uint64_t{four.bits} : 0; });
  multigrid::quantum_restrict(s, 0, reg);
  const auto f = s.pipeline.decode(*s.f[1]);
  EXPECT_DOUBLE_EQ(f[0].value(), 0.0);
  EXPECT_DOUBLE_EQ(f[2].value(), 2.0);
  EXPECT_DOUBLE_EQ(f[4].value(), 0.0);
}

TEST(QuantumMultigrid, InterpolateExample) {
  // coarse (1, 0.5) -> fine correction (1, 0.75, 0.5, 0.25)
  const auto p = GridProblem::zero(2, 0);
  QuantumVCycleConfig cfg;
  cfg.levels = 2;
  auto s = multigrid::prepare_vcycle_state(p, WordVector(4, DataWord::from_raw(0, cfg.format)), cfg);
  const auto idx = s.pipeline.index();
  s.u[1] = s.pipeline.allocate("u1");
  const WordVector c = words({1.0, 0, 0.5, 0}, cfg.format);
  s.pipeline.xor_kernel(s.u[1], [&](const sim::BasisLabel& l) { return std::uint64_t{c[l.field(idx.offset, idx.width)].bits}; });
  multigrid::quantum_interpolate(s, 1);
  const auto u = multigrid::decode_solution(s);
  EXPECT_EQ(raws(u), raws(words({1.0, 0.75, 0.5, 0.25}, cfg.format)));
}

TEST(QuantumMultigrid, ZeroProblemStaysZero) {
  const auto p = GridProblem::zero(3, 0);
  QuantumVCycleConfig cfg;
  cfg.levels = 2;
  cfg.coarse_sweeps = 4;
  auto s = multigrid::prepare_vcycle_state(p, WordVector(8, DataWord::from_raw(0, cfg.format)), cfg);
  multigrid::quantum_v_cycle(s);
  for (const auto& w : multigrid::decode_solution(s)) EXPECT_EQ(w.raw(), 0);
  EXPECT_LT(s.pipeline.amplitude_deviation(), 1e-12);
}

struct CycleCase {
  std::size_t n_qubits;
  int total_bits;
  int frac_bits;
  std::size_t levels;
  std::size_t s0;
  std::size_t s1;
};

class BitExact : public ::testing::TestWithParam<CycleCase> {};

TEST_P(BitExact, MatchesClassicalFixedVCycle) {
  const auto c = GetParam();
  QuantumVCycleConfig cfg;
  cfg.format = {c.total_bits, c.frac_bits};
  cfg.levels = c.levels;
  cfg.s0 = c.s0;
  cfg.s1 = c.s1;
  cfg.coarse_sweeps = 24;
  std::mt19937_64 rng(1234 + c.n_qubits * 10 + c.total_bits);
  const auto p = GridProblem::rod(c.n_qubits, 0, {0.5, -0.25});
  for (int trial = 0; trial < 2; ++trial) {
    const auto u0 = random_words(p.size(), cfg.format, rng);
    auto s = multigrid::prepare_vcycle_state(p, u0, cfg);
    multigrid::quantum_v_cycle(s);
    const auto expect = classical::v_cycle(p, u0, cfg.classical());
    EXPECT_EQ(raws(multigrid::decode_solution(s)), raws(expect)) << "trial " << trial;
    EXPECT_LT(s.pipeline.amplitude_deviation(), 1e-12);
  }
}

INSTANTIATE_TEST_SUITE_P(Cases, BitExact,
                         ::testing::Values(CycleCase{2, 8, 6, 2, 1, 1}, CycleCase{3, 8, 6, 2, 1, 1},
                                           CycleCase{3, 6, 4, 2, 2, 2}, CycleCase{2, 6, 4, 1, 1, 1}));

TEST(QuantumMultigrid, LevelOperatorsTouchOnlyTheirRegisters) {
  const auto p = GridProblem::rod(3, 0, {0.5, 0.25});
  QuantumVCycleConfig cfg;
  cfg.levels = 2;
  std::mt19937_64 rng(7);
  auto s = multigrid::prepare_vcycle_state(p, random_words(8, cfg.format, rng), cfg);
  const auto r = multigrid::quantum_residual(s, 0);
  multigrid::quantum_restrict(s, 0, r);

  // per index: every pre-existing qubit outside u1, which the sweeps may rewrite
  const auto idx = s.pipeline.index();
  const auto u1 = s.u[1];
  const auto frozen = [&] {
    std::map<std::uint64_t, sim::BasisLabel> out;
    const std::size_t width = s.pipeline.state().layout().width();
    for (const auto& b : s.pipeline.state().branches()) {
      sim::BasisLabel l = b.label;
      l.resize(width);
      l.set_field(u1.offset, u1.width, 0);
      out[l.field(idx.offset, idx.width)] = l;
    }
    return out;
  };
  const auto before = frozen();
  const std::size_t width = s.pipeline.state().layout().width();
  multigrid::quantum_smooth(s, 1, 3);
  for (const auto& b : s.pipeline.state().branches()) {
    const auto i = b.label.field(idx.offset, idx.width);
    sim::BasisLabel prefix = b.label;
    prefix.resize(width);
    prefix.set_field(u1.offset, u1.width, 0);
    EXPECT_TRUE(prefix == before.at(i)) << "index " << i;
    if (i % 2 != 0) EXPECT_EQ(b.label.field(u1.offset, u1.width), 0u) << "odd branch " << i;
  }
}

TEST(QuantumMultigrid, CycleIsReversible) {
  const auto p = GridProblem::rod(2, 0);
  QuantumVCycleConfig cfg;
  cfg.levels = 2;
  cfg.coarse_sweeps = 8;
  std::mt19937_64 rng(11);
  const auto u0 = random_words(4, cfg.format, rng);
  auto s = multigrid::prepare_vcycle_state(p, u0, cfg);
  const auto mark = s.pipeline.steps();
  const auto before = s.pipeline.state();
  multigrid::quantum_v_cycle(s);
  s.pipeline.undo_to(mark);
  const auto& a = before.branches();
  const auto& b = s.pipeline.state().branches();
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    sim::BasisLabel la = a[i].label;
    sim::BasisLabel lb = b[i].label;
    // the undone state lives on a wider layout whose extra qubits are zero
    sim::BasisLabel wide(lb.width());
    wide.xor_prefix(la);
    EXPECT_TRUE(wide == lb) << i;
    EXPECT_NEAR(std::abs(a[i].amplitude - b[i].amplitude), 0.0, 1e-10);
  }
}

TEST(QuantumMultigrid, CycleEstimateDelegates) {
  EXPECT_EQ(multigrid::estimate_cycles_with_compression(2.0, std::ldexp(1.0, -10)), 10u);
  EXPECT_EQ(multigrid::estimate_cycles_with_compression(std::exp(1.0), std::exp(-5.0)), 5u);
}

}  // namespace
