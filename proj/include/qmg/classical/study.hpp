#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "qmg/classical/compress.hpp"
#include "qmg/classical/multigrid.hpp"

namespace qmg::classical {

/// Uniform random start in [-amplitude, amplitude].
RealVector random_guess(std::size_t n, std::mt19937_64& rng, double amplitude = 1.0);

/// Largest per-cycle linf contraction of a history (cycle 0 excluded).
double max_contraction(const std::vector<HistoryRow>& history);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

struct ScalingPoint {
  std::size_t n_qubits = 0;
  double contraction = 0.0;
};

/// Real-mode V-cycle convergence on the zero-source problem from a random
/// start: the history at the base size down to the tightest tolerance,
/// cycle counts per tolerance against log10(1/eps), and the worst
/// contraction at every size in [scale_lo, scale_hi]. `config.levels == 0`
/// means the full hierarchy down to 2 points at every size.
struct ConvergenceStudy {
  std::size_t n_qubits = 0;
  std::vector<HistoryRow> history;
  double max_contraction = 0.0;
  std::vector<double> epsilons;
  std::vector<std::size_t> cycles;
  LinearFit fit;
  std::vector<ScalingPoint> scaling;
  double scaling_ratio = 0.0;  // max / min contraction across sizes
  bool converged = true;
};

ConvergenceStudy convergence_study(std::size_t n_qubits, int dx_exp, const VCycleConfig& config,
                                   const std::vector<double>& epsilons, std::size_t scale_lo, std::size_t scale_hi,
                                   std::uint64_t seed);  // one generator, base size first

/// Truncated-Fourier probe of the exact discrete solution of a problem.
struct CompressionReport {
  RealVector solution;
  CompressionCurve curve;
  bool monotone = false;        // within 1e-12 absolute slack
  std::size_t mode_budget = 0;  // floor(fraction N)
  double error_at_budget = 0.0;
};

CompressionReport probe_solution(const GridProblem& problem, double fraction = 0.1);

}  // namespace qmg::classical
