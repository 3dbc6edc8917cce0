#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "qmg/classical/multigrid.hpp"
#include "qmg/qjacobi/pipeline.hpp"

/// V-cycle on a digitally encoded state. Level l lives on the branches whose
/// index is a multiple of 2^l; every level operator is a gather at that
/// stride followed by branch arithmetic on the level's own registers.
namespace qmg::multigrid {

using qjacobi::Register;

struct LevelMap {
  std::size_t level = 0;
  std::size_t stride = 1;
  std::size_t points = 0;

  bool active(std::uint64_t i) const noexcept { return i % stride == 0; }
  std::size_t local(std::uint64_t i) const noexcept { return static_cast<std::size_t>(i / stride); }
};

struct QuantumVCycleConfig {
  std::size_t s0 = 1;
  std::size_t s1 = 1;
  std::size_t levels = 3;
  /// Smoother sweeps on the coarsest grid, the classical solve's cap.
  std::size_t coarse_sweeps = 32;
  fixed::FixedPointFormat format;

  void validate(const classical::GridProblem& problem) const;
  /// The classical fixed-point configuration computing the same iterates.
  classical::VCycleConfig classical() const;
};

struct QuantumVCycleState {
  qjacobi::DigitalPipeline pipeline;
  classical::GridProblem problem;
  classical::FixedProblem words;
  QuantumVCycleConfig config;
  std::vector<classical::Level> levels;
  std::vector<LevelMap> maps;
  std::vector<Register> u;                 // current solution (error, below level 0) per level
  std::vector<std::optional<Register>> f;  // right-hand sides; level 0 is computed on the fly
  std::size_t cycles = 0;
};

/// Uniform superposition with the level-0 solution register holding `u0`.
QuantumVCycleState prepare_vcycle_state(const classical::GridProblem& problem, const classical::WordVector& u0,
                                        const QuantumVCycleConfig& config);

/// `count` undamped Jacobi sweeps on level `level`.
void quantum_smooth(QuantumVCycleState& s, std::size_t level, std::size_t count);

/// Fresh register holding r = f - A u on the active branches of `level`.
Register quantum_residual(QuantumVCycleState& s, std::size_t level);

/// Full weighting of `r` (a level-`fine` register) into a fresh right-hand
/// side of level fine + 1; also resets that level's solution to zero.
void quantum_restrict(QuantumVCycleState& s, std::size_t fine, const Register& r);

/// Linear interpolation of level `coarse`'s solution added to level coarse - 1.
void quantum_interpolate(QuantumVCycleState& s, std::size_t coarse);

/// `iterations` smoothing sweeps on the coarsest level.
void quantum_coarse_solve(QuantumVCycleState& s, std::size_t level, std::size_t iterations);

/// One V-cycle from the current level-0 solution.
void quantum_v_cycle(QuantumVCycleState& s);

/// Decoded level-0 solution words.
classical::WordVector decode_solution(const QuantumVCycleState& s);

/// Cycle count when each cycle contracts the error by kappa.
std::uint64_t estimate_cycles_with_compression(double kappa, double epsilon);

}  // namespace qmg::multigrid
