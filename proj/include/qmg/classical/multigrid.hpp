#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "qmg/classical/kernels.hpp"

namespace qmg::classical {

enum class Arithmetic { kReal, kFixed };

struct VCycleConfig {
  std::size_t s0 = 2;      // pre-smoothing sweeps
  std::size_t s1 = 2;      // post-smoothing sweeps
  std::size_t levels = 3;  // grids in the hierarchy, the last one solved directly
  double omega = 2.0 / 3.0;
  Arithmetic mode = Arithmetic::kReal;
  fixed::FixedPointFormat format;
  /// Fixed mode: cap on smoother sweeps while solving the coarsest grid.
  /// Rounding can trap the iterate in a 2-cycle, so the cap is an iteration
  /// count, not an error threshold.
  std::size_t coarse_sweep_cap = 32;

  void validate(const GridProblem& problem) const;
};

/// Thomas elimination of the level's tridiagonal system.
RealVector exact_coarse_solve(const Level& level, const RealVector& f);

struct FixedCoarseSolve {
  WordVector u;
  std::size_t sweeps = 0;   // sweeps applied before stopping
  bool stationary = false;  // the next sweep would not change u
};

/// Undamped fixed-point Jacobi from `u0` until the iterate stops changing,
/// or after `cap` sweeps. Either way the result equals `cap` sweeps.
FixedCoarseSolve fixed_coarse_solve(const Level& level, const LevelGhosts& ghosts, const WordVector& f,
                                    const WordVector& u0, std::size_t cap);

/// One V-cycle on the finest level of `problem`.
RealVector v_cycle(const GridProblem& problem, const RealVector& u, const VCycleConfig& config);
WordVector v_cycle(const GridProblem& problem, const WordVector& u, const VCycleConfig& config);

struct HistoryRow {
  std::size_t cycle = 0;
  double linf_residual = 0.0;
  double l2_residual = 0.0;
  double contraction = 0.0;  // linf ratio to the previous row; 0 for cycle 0
};

struct SolveResult {
  RealVector u;
  std::size_t cycles = 0;
  bool converged = false;
  std::vector<HistoryRow> history;  // row 0 is the initial guess
};

/// Repeats real-mode V-cycles until the linf residual drops below `epsilon`
/// or `max_cycles` is reached.
SolveResult solve_to_tolerance(const GridProblem& problem, const VCycleConfig& config, double epsilon,
                               RealVector u0, std::size_t max_cycles = 200);

/// CSV with columns cycle,linf_residual,l2_residual,contraction_factor.
std::string history_csv(const std::vector<HistoryRow>& history);

}  // namespace qmg::classical
