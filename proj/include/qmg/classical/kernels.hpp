#pragma once

#include <vector>

#include "qmg/classical/problem.hpp"
#include "qmg/encoding/fixed_point.hpp"

namespace qmg::classical {

using RealVector = std::vector<double>;
using WordVector = std::vector<fixed::DataWord>;

// Real arithmetic. `f` is the level's right-hand side.

RealVector jacobi_step(const Level& level, const RealVector& f, const RealVector& u);
RealVector weighted_jacobi_step(const Level& level, const RealVector& f, const RealVector& u, double omega);
RealVector residual(const Level& level, const RealVector& f, const RealVector& u);
/// r_j = (r_{2j-1} + 2 r_{2j} + r_{2j+1}) / 4 with r_{-1} = 0.
RealVector restrict_full_weighting(const RealVector& fine);
/// e_{2j} = e_j, e_{2j+1} = (e_j + e_{j+1}) / 2 with e_{N_c} = 0.
RealVector interpolate_linear(const RealVector& coarse);

RealVector jacobi_step(const GridProblem& problem, const RealVector& u);
RealVector residual(const GridProblem& problem, const RealVector& u);

// Fixed point. Every point kernel is one exact rational evaluation rounded
// half to even, so the branch arithmetic of the quantum pipelines can
// reproduce it word for word.

/// (f H^2 - lower L - upper R) / diag
fixed::DataWord jacobi_point(const StencilRow& row, const fixed::DataWord& f, const fixed::DataWord& left,
                             const fixed::DataWord& right);
/// f - (lower L + diag u + upper R) / H^2
fixed::DataWord residual_point(const StencilRow& row, const fixed::DataWord& f, const fixed::DataWord& left,
                               const fixed::DataWord& u, const fixed::DataWord& right);
/// (a + 2b + c) / 4
fixed::DataWord restrict_point(const fixed::DataWord& a, const fixed::DataWord& b, const fixed::DataWord& c);
/// (a + b) / 2
fixed::DataWord midpoint(const fixed::DataWord& a, const fixed::DataWord& b);

/// Ghost words for a level: the problem's at level 0, zero below.
struct LevelGhosts {
  fixed::DataWord left;
  fixed::DataWord right;
};

WordVector jacobi_step(const Level& level, const LevelGhosts& ghosts, const WordVector& f, const WordVector& u);
WordVector residual(const Level& level, const LevelGhosts& ghosts, const WordVector& f, const WordVector& u);
WordVector restrict_full_weighting(const WordVector& fine);
WordVector interpolate_linear(const WordVector& coarse);
WordVector add(const WordVector& a, const WordVector& b);

RealVector decode(const WordVector& w);
WordVector encode(const RealVector& v, const fixed::FixedPointFormat& format);

double linf_norm(const RealVector& v);
double l2_norm(const RealVector& v);

}  // namespace qmg::classical
