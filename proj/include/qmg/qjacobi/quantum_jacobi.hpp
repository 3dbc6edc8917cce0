#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "qmg/classical/kernels.hpp"
#include "qmg/qjacobi/pipeline.hpp"

/// Jacobi iteration on a digitally encoded solution: every grid point is one
/// branch, neighbors are gathered with the sharing protocol and the update is
/// branch arithmetic.
namespace qmg::qjacobi {

using GuessFunction = std::function<double(std::uint64_t)>;

struct JacobiPipelineState {
  DigitalPipeline pipeline;
  classical::GridProblem problem;
  classical::FixedProblem words;  // encoded rhs and ghosts
  Register data;
  Register left;
  Register right;
  std::size_t sweeps = 0;
};

/// Uniform index superposition with data register encode(guess(i)).
JacobiPipelineState prepare_initial_state(const classical::GridProblem& problem, const GuessFunction& guess,
                                          const fixed::FixedPointFormat& format);

/// i -> i + 1 (direction > 0) or i - 1 (direction < 0), mod N.
void cyclic_shift_index(JacobiPipelineState& s, int direction);

/// Fills the left / right registers with u_{i-1}, u_{i+1}; the two end
/// branches receive the ghost words instead of the wrapped ones.
void gather_neighbors(JacobiPipelineState& s);

/// data := (f_i dx^2 - left - right) / (-2), rounded half to even; old data
/// and neighbor words move to garbage so the neighbor registers are zero again.
void jacobi_update_J(JacobiPipelineState& s);

/// One full sweep (gather + J).
void quantum_jacobi_sweep(JacobiPipelineState& s);

struct QuantumJacobiRun {
  JacobiPipelineState state;
  std::vector<classical::WordVector> iterates;  // iterates[0] is the initial guess
  std::vector<double> amplitude_deviation;      // per sweep boundary
  std::vector<std::size_t> label_width;         // per sweep boundary
};

QuantumJacobiRun run_quantum_jacobi(const classical::GridProblem& problem, const GuessFunction& guess,
                                    std::size_t sweeps, const fixed::FixedPointFormat& format);

/// Classical fixed-point Jacobi iterates from the same guess, for comparison.
std::vector<classical::WordVector> classical_jacobi_iterates(const classical::GridProblem& problem,
                                                             const GuessFunction& guess, std::size_t sweeps,
                                                             const fixed::FixedPointFormat& format);

}  // namespace qmg::qjacobi
