#include "qmg/multigrid/quantum_multigrid.hpp"

#include <fmt/format.h>

#include "qmg/resources/estimator.hpp"

namespace qmg::multigrid {

using classical::Level;
using fixed::DataWord;
using qjacobi::BasisLabel;
using qjacobi::read_word;

namespace {

std::uint64_t index_of(const BasisLabel& l, const Register& idx) { return l.field(idx.offset, idx.width); }

DataWord zero_word(const QuantumVCycleState& s) { return DataWord::from_raw(0, s.config.format); }

DataWord ghost_left(const QuantumVCycleState& s, std::size_t level) {
  return level == 0 ? s.words.ghost_left : zero_word(s);
}

DataWord ghost_right(const QuantumVCycleState& s, std::size_t level) {
  return level == 0 ? s.words.ghost_right : zero_word(s);
}

qjacobi::IndexPredicate active_on(const LevelMap& m) {
  return [m](std::uint64_t i) { return m.active(i); };
}

/// Level right-hand side on a branch: the encoded source at level 0, the
/// restricted residual register below.
std::function<DataWord(const BasisLabel&)> rhs_reader(const QuantumVCycleState& s, std::size_t level) {
  const Register idx = s.pipeline.index();
  if (level == 0) {
    return [idx, rhs = s.words.rhs](const BasisLabel& l) { return rhs[index_of(l, idx)]; };
  }
  if (!s.f[level]) throw std::logic_error(fmt::format("level {} has no right-hand side yet", level));
  return [reg = *s.f[level], fmt = s.config.format](const BasisLabel& l) { return read_word(l, reg, fmt); };
}

void check_level(const QuantumVCycleState& s, std::size_t level) {
  if (level >= s.levels.size()) {
    throw std::out_of_range(fmt::format("level {} outside a {}-level hierarchy", level, s.levels.size()));
  }
}

}  // namespace

void QuantumVCycleConfig::validate(const classical::GridProblem& problem) const {
  classical().validate(problem);
  if (coarse_sweeps < 1) throw std::invalid_argument("coarse solve needs at least one sweep");
}

classical::VCycleConfig QuantumVCycleConfig::classical() const {
  classical::VCycleConfig c;
  c.s0 = s0;
  c.s1 = s1;
  c.levels = levels;
  c.omega = 1.0;
  c.mode = classical::Arithmetic::kFixed;
  c.format = format;
  c.coarse_sweep_cap = coarse_sweeps;
  return c;
}

QuantumVCycleState prepare_vcycle_state(const classical::GridProblem& problem, const classical::WordVector& u0,
                                        const QuantumVCycleConfig& config) {
  config.validate(problem);
  if (u0.size() != problem.size()) throw std::invalid_argument("initial guess length mismatch");
  QuantumVCycleState s{qjacobi::DigitalPipeline(problem.n_qubits, config.format),
                       problem,
                       classical::encode_problem(problem, config.format),
                       config,
                       classical::build_hierarchy(problem, config.levels),
                       {},
                       {},
                       {},
                       0};
  for (std::size_t l = 0; l < s.levels.size(); ++l) {
    s.maps.push_back({l, std::size_t{1} << l, s.levels[l].size});
  }
  s.u.push_back(s.pipeline.allocate("u0"));
  // coarse registers are allocated fresh by each restriction
  s.u.resize(s.levels.size());
  s.f.resize(s.levels.size());
  std::vector<std::uint64_t> words;
  for (const auto& w : u0) words.push_back(w.bits);
  const Register idx = s.pipeline.index();
  s.pipeline.xor_kernel(s.u[0], [idx, words](const BasisLabel& l) { return words[index_of(l, idx)]; });
  return s;
}

void quantum_smooth(QuantumVCycleState& s, std::size_t level, std::size_t count) {
  check_level(s, level);
  const LevelMap map = s.maps[level];
  const Level lv = s.levels[level];
  const auto fmt = s.config.format;
  const Register idx = s.pipeline.index();
  for (std::size_t t = 0; t < count; ++t) {
    auto& p = s.pipeline;
    const auto nb = p.gather(s.u[level], map.stride, ghost_left(s, level), ghost_right(s, level),
                             fmt::format("u{}.nb", level));
    p.retire(s.u[level], active_on(map));
    const auto f = rhs_reader(s, level);
    p.xor_kernel(
        s.u[level],
        [=](const BasisLabel& b) {
          const auto i = index_of(b, idx);
          return std::uint64_t{
              classical::jacobi_point(lv.row(map.local(i)), f(b), read_word(b, nb.left, fmt), read_word(b, nb.right, fmt))
                  .bits};
        },
        active_on(map));
  }
}

Register quantum_residual(QuantumVCycleState& s, std::size_t level) {
  check_level(s, level);
  const LevelMap map = s.maps[level];
  const Level lv = s.levels[level];
  const auto fmt = s.config.format;
  const Register idx = s.pipeline.index();
  auto& p = s.pipeline;
  const auto nb = p.gather(s.u[level], map.stride, ghost_left(s, level), ghost_right(s, level),
                           fmt::format("u{}.nb", level));
  const Register r = p.allocate(fmt::format("r{}", level));
  const auto f = rhs_reader(s, level);
  const Register u = s.u[level];
  p.xor_kernel(
      r,
      [=](const BasisLabel& b) {
        const auto i = index_of(b, idx);
        return std::uint64_t{classical::residual_point(lv.row(map.local(i)), f(b), read_word(b, nb.left, fmt),
                                                       read_word(b, u, fmt), read_word(b, nb.right, fmt))
                                 .bits};
      },
      active_on(map));
  return r;
}

void quantum_restrict(QuantumVCycleState& s, std::size_t fine, const Register& r) {
  check_level(s, fine + 1);
  const LevelMap fm = s.maps[fine];
  const LevelMap cm = s.maps[fine + 1];
  const auto fmt = s.config.format;
  auto& p = s.pipeline;
  // the point left of fine index 0 is r_{-1} = 0, the one right of the last
  // odd point is never read
  const auto nb = p.gather(r, fm.stride, zero_word(s), zero_word(s), fmt::format("r{}.nb", fine));
  const Register f = p.allocate(fmt::format("f{}", fine + 1));
  p.xor_kernel(
      f,
      [=](const BasisLabel& b) {
        return std::uint64_t{classical::restrict_point(read_word(b, nb.left, fmt), read_word(b, r, fmt),
                                                       read_word(b, nb.right, fmt))
                                 .bits};
      },
      active_on(cm));
  s.f[fine + 1] = f;
  // the coarse error equation starts from zero
  s.u[fine + 1] = p.allocate(fmt::format("u{}", fine + 1));
}

void quantum_interpolate(QuantumVCycleState& s, std::size_t coarse) {
  if (coarse == 0) throw std::invalid_argument("level 0 has no finer level to interpolate to");
  check_level(s, coarse);
  const std::size_t fine = coarse - 1;
  const LevelMap fm = s.maps[fine];
  const LevelMap cm = s.maps[coarse];
  const auto fmt = s.config.format;
  const Register idx = s.pipeline.index();
  auto& p = s.pipeline;
  const Register uc = s.u[coarse];
  // odd fine points average their coarse neighbors; past the last coarse point e = 0
  const auto nb = p.gather(uc, fm.stride, zero_word(s), zero_word(s), fmt::format("u{}.nb", coarse));
  const Register e = p.allocate(fmt::format("e{}", fine));
  p.xor_kernel(
      e,
      [=](const BasisLabel& b) {
        if (cm.active(index_of(b, idx))) return std::uint64_t{read_word(b, uc, fmt).bits};
        return std::uint64_t{classical::midpoint(read_word(b, nb.left, fmt), read_word(b, nb.right, fmt)).bits};
      },
      active_on(fm));
  const Register old = p.retire(s.u[fine], active_on(fm));
  p.xor_kernel(
      s.u[fine],
      [=](const BasisLabel& b) { return std::uint64_t{fixed::fixed_add(read_word(b, old, fmt), read_word(b, e, fmt)).bits}; },
      active_on(fm));
}

void quantum_coarse_solve(QuantumVCycleState& s, std::size_t level, std::size_t iterations) {
  quantum_smooth(s, level, iterations);
}

namespace {

void cycle_from(QuantumVCycleState& s, std::size_t l) {
  if (l + 1 == s.levels.size()) {
    quantum_coarse_solve(s, l, s.config.coarse_sweeps);
    return;
  }
  quantum_smooth(s, l, s.config.s0);
  const Register r = quantum_residual(s, l);
  quantum_restrict(s, l, r);
  cycle_from(s, l + 1);
  quantum_interpolate(s, l + 1);
  quantum_smooth(s, l, s.config.s1);
}

}  // namespace

void quantum_v_cycle(QuantumVCycleState& s) {
  cycle_from(s, 0);
  ++s.cycles;
}

classical::WordVector decode_solution(const QuantumVCycleState& s) { return s.pipeline.decode(s.u[0]); }

std::uint64_t estimate_cycles_with_compression(double kappa, double epsilon) {
  return resources::vcycle_count(kappa, epsilon);
}

}  // namespace qmg::multigrid
