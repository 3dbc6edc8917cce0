#include "qmg/qjacobi/quantum_jacobi.hpp"

namespace qmg::qjacobi {

JacobiPipelineState prepare_initial_state(const classical::GridProblem& problem, const GuessFunction& guess,
                                          const fixed::FixedPointFormat& format) {
  problem.validate();
  DigitalPipeline pipe(problem.n_qubits, format);
  const Register data = pipe.allocate("u");
  const Register left = pipe.allocate("left");
  const Register right = pipe.allocate("right");
  std::vector<std::uint64_t> words;
  for (std::uint64_t i = 0; i < problem.size(); ++i) words.push_back(fixed::encode_fixed(guess(i), format).bits);
  const Register idx = pipe.index();
  pipe.xor_kernel(data, [idx, words](const BasisLabel& l) { return words[l.field(idx.offset, idx.width)]; });
  JacobiPipelineState s{std::move(pipe), problem, classical::encode_problem(problem, format), data, left, right, 0};
  return s;
}

void cyclic_shift_index(JacobiPipelineState& s, int direction) {
  if (direction == 0) throw std::invalid_argument("shift direction must be nonzero");
  s.pipeline.shift_index(direction > 0 ? 1 : -1);
}

void gather_neighbors(JacobiPipelineState& s) {
  const Neighbors out{s.left, s.right, s.pipeline.allocate("wrap")};
  s.pipeline.gather_into(s.data, 1, s.words.ghost_left, s.words.ghost_right, out);
}

void jacobi_update_J(JacobiPipelineState& s) {
  auto& p = s.pipeline;
  p.retire(s.data);
  const Register l = p.retire(s.left);
  const Register r = p.retire(s.right);
  const Register idx = p.index();
  const auto fmt = p.format();
  const auto level = classical::build_hierarchy(s.problem, 1).front();
  const auto rhs = s.words.rhs;
  p.xor_kernel(s.data, [=](const BasisLabel& b) {
    const auto i = b.field(idx.offset, idx.width);
    return std::uint64_t{
        classical::jacobi_point(level.row(i), rhs[i], read_word(b, l, fmt), read_word(b, r, fmt)).bits};
  });
  ++s.sweeps;
}

void quantum_jacobi_sweep(JacobiPipelineState& s) {
  gather_neighbors(s);
  jacobi_update_J(s);
}

QuantumJacobiRun run_quantum_jacobi(const classical::GridProblem& problem, const GuessFunction& guess,
                                    std::size_t sweeps, const fixed::FixedPointFormat& format) {
  QuantumJacobiRun run{prepare_initial_state(problem, guess, format), {}, {}, {}};
  const auto snapshot = [&] {
    run.iterates.push_back(run.state.pipeline.decode(run.state.data));
    run.amplitude_deviation.push_back(run.state.pipeline.amplitude_deviation());
    run.label_width.push_back(run.state.pipeline.state().layout().width());
  };
  snapshot();
  for (std::size_t t = 0; t < sweeps; ++t) {
    quantum_jacobi_sweep(run.state);
    snapshot();
  }
  return run;
}

std::vector<classical::WordVector> classical_jacobi_iterates(const classical::GridProblem& problem,
                                                             const GuessFunction& guess, std::size_t sweeps,
                                                             const fixed::FixedPointFormat& format) {
  const auto fp = classical::encode_problem(problem, format);
  const auto level = classical::build_hierarchy(problem, 1).front();
  classical::WordVector u;
  for (std::uint64_t i = 0; i < problem.size(); ++i) u.push_back(fixed::encode_fixed(guess(i), format));
  std::vector<classical::WordVector> out{u};
  for (std::size_t t = 0; t < sweeps; ++t) {
    u = classical::jacobi_step(level, {fp.ghost_left, fp.ghost_right}, fp.rhs, u);
    out.push_back(u);
  }
  return out;
}

}  // namespace qmg::qjacobi
