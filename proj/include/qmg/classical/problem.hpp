#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "qmg/encoding/fixed_point.hpp"

namespace qmg::classical {

/// Dirichlet data as ghost values u_{-1} and u_N.
struct Ghosts {
  double left = 0.0;
  double right = 0.0;
};

/// 1D Poisson problem u'' = f on N = 2^n unknowns u_0..u_{N-1} with grid
/// spacing dx = 2^dx_exp.
struct GridProblem {
  std::size_t n_qubits = 2;
  int dx_exp = 0;
  Ghosts ghosts;
  std::vector<double> rhs;  // f_0..f_{N-1}

  std::size_t size() const noexcept { return std::size_t{1} << n_qubits; }
  double dx() const;
  void validate() const;

  /// Zero source, ends held at (left, right).
  static GridProblem rod(std::size_t n_qubits, int dx_exp, Ghosts ghosts = {1.0, 0.5});
  static GridProblem zero(std::size_t n_qubits, int dx_exp);
  /// f_i = sin(pi q (i+1) / (N+1)), q half periods (a Dirichlet eigenmode),
  /// homogeneous ends.
  static GridProblem sine(std::size_t n_qubits, int dx_exp, int q = 2, Ghosts ghosts = {});
  static GridProblem custom(std::size_t n_qubits, int dx_exp, std::vector<double> rhs, Ghosts ghosts);
};

/// Row i of a level operator: (lower u_{i-1} + diag u_i + upper u_{i+1}) / H^2.
struct StencilRow {
  std::int64_t lower = 1;
  std::int64_t diag = -2;
  std::int64_t upper = 1;
  int h_exp = 0;  // H = 2^h_exp
};

/// One grid of the hierarchy. Level 0 is the finest; level l has N / 2^l
/// points, H = 2^l dx, and coarse point j sits on fine point 2j.
///
/// Coarse levels carry the Galerkin operator of the full-weighting /
/// linear-interpolation pair, tridiag(1, -2, 1) / H^2 except for the first
/// diagonal entry -(2^l + 1), and homogeneous ghosts (they solve for an error).
struct Level {
  std::size_t index = 0;
  std::size_t size = 0;
  int h_exp = 0;
  Ghosts ghosts;

  StencilRow row(std::size_t i) const;
};

/// `levels` grids starting from the problem's own; each coarse grid must
/// keep at least 2 points.
std::vector<Level> build_hierarchy(const GridProblem& problem, std::size_t levels);

/// Ghost words and RHS words of the finest level in `format`.
struct FixedProblem {
  fixed::DataWord ghost_left;
  fixed::DataWord ghost_right;
  std::vector<fixed::DataWord> rhs;
};

FixedProblem encode_problem(const GridProblem& problem, const fixed::FixedPointFormat& format);

}  // namespace qmg::classical
