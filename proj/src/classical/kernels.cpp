#include "qmg/classical/kernels.hpp"

#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

namespace qmg::classical {

using fixed::DataWord;

namespace {

void check_lengths(const Level& level, std::size_t f, std::size_t u) {
  if (f != level.size || u != level.size) {
    throw std::invalid_argument(fmt::format("level {} has {} points, got vectors of {} and {}", level.index,
                                            level.size, f, u));
  }
}

double h2(int h_exp) { return std::ldexp(1.0, 2 * h_exp); }

__int128 pow2(int e) { return __int128{1} << e; }

}  // namespace

RealVector jacobi_step(const Level& level, const RealVector& f, const RealVector& u) {
  check_lengths(level, f.size(), u.size());
  const std::size_t n = level.size;
  const double hh = h2(level.h_exp);
  RealVector out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto row = level.row(i);
    const double l = i == 0 ? level.ghosts.left : u[i - 1];
    const double r = i + 1 == n ? level.ghosts.right : u[i + 1];
    out[i] = (f[i] * hh - row.lower * l - row.upper * r) / static_cast<double>(row.diag);
  }
  return out;
}

RealVector weighted_jacobi_step(const Level& level, const RealVector& f, const RealVector& u, double omega) {
  RealVector j = jacobi_step(level, f, u);
  for (std::size_t i = 0; i < j.size(); ++i) j[i] = (1.0 - omega) * u[i] + omega * j[i];
  return j;
}

RealVector residual(const Level& level, const RealVector& f, const RealVector& u) {
  check_lengths(level, f.size(), u.size());
  const std::size_t n = level.size;
  const double hh = h2(level.h_exp);
  RealVector out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto row = level.row(i);
    const double l = i == 0 ? level.ghosts.left : u[i - 1];
    const double r = i + 1 == n ? level.ghosts.right : u[i + 1];
    out[i] = f[i] - (row.lower * l + row.diag * u[i] + row.upper * r) / hh;
  }
  return out;
}

RealVector restrict_full_weighting(const RealVector& fine) {
  if (fine.size() < 4 || fine.size() % 2 != 0) {
    throw std::invalid_argument(fmt::format("restriction needs an even length >= 4, got {}", fine.size()));
  }
  RealVector out(fine.size() / 2);
  for (std::size_t j = 0; j < out.size(); ++j) {
    const double a = j == 0 ? 0.0 : fine[2 * j - 1];
    out[j] = 0.25 * (a + 2.0 * fine[2 * j] + fine[2 * j + 1]);
  }
  return out;
}

RealVector interpolate_linear(const RealVector& coarse) {
  if (coarse.size() < 2) throw std::invalid_argument("interpolation needs at least 2 coarse points");
  RealVector out(2 * coarse.size());
  for (std::size_t j = 0; j < coarse.size(); ++j) {
    const double next = j + 1 < coarse.size() ? coarse[j + 1] : 0.0;
    out[2 * j] = coarse[j];
    out[2 * j + 1] = 0.5 * (coarse[j] + next);
  }
  return out;
}

RealVector jacobi_step(const GridProblem& problem, const RealVector& u) {
  return jacobi_step(build_hierarchy(problem, 1).front(), problem.rhs, u);
}

RealVector residual(const GridProblem& problem, const RealVector& u) {
  return residual(build_hierarchy(problem, 1).front(), problem.rhs, u);
}

DataWord jacobi_point(const StencilRow& row, const DataWord& f, const DataWord& left, const DataWord& right) {
  const int e = 2 * row.h_exp;
  const __int128 neighbors = __int128{row.lower} * left.raw() + __int128{row.upper} * right.raw();
  if (e >= 0) return fixed::from_rational_raw(__int128{f.raw()} * pow2(e) - neighbors, row.diag, f.format);
  return fixed::from_rational_raw(f.raw() - neighbors * pow2(-e), __int128{row.diag} * pow2(-e), f.format);
}

DataWord residual_point(const StencilRow& row, const DataWord& f, const DataWord& left, const DataWord& u,
                        const DataWord& right) {
  const int e = 2 * row.h_exp;
  const __int128 s = __int128{row.lower} * left.raw() + __int128{row.diag} * u.raw() + __int128{row.upper} * right.raw();
  if (e >= 0) return fixed::from_rational_raw(__int128{f.raw()} * pow2(e) - s, pow2(e), f.format);
  return fixed::from_rational_raw(f.raw() - s * pow2(-e), 1, f.format);
}

DataWord restrict_point(const DataWord& a, const DataWord& b, const DataWord& c) {
  return fixed::from_rational_raw(__int128{a.raw()} + 2 * __int128{b.raw()} + c.raw(), 4, b.format);
}

DataWord midpoint(const DataWord& a, const DataWord& b) {
  return fixed::from_rational_raw(__int128{a.raw()} + b.raw(), 2, a.format);
}

WordVector jacobi_step(const Level& level, const LevelGhosts& ghosts, const WordVector& f, const WordVector& u) {
  check_lengths(level, f.size(), u.size());
  const std::size_t n = level.size;
  WordVector out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& l = i == 0 ? ghosts.left : u[i - 1];
    const auto& r = i + 1 == n ? ghosts.right : u[i + 1];
    out.push_back(jacobi_point(level.row(i), f[i], l, r));
  }
  return out;
}

WordVector residual(const Level& level, const LevelGhosts& ghosts, const WordVector& f, const WordVector& u) {
  check_lengths(level, f.size(), u.size());
  const std::size_t n = level.size;
  WordVector out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& l = i == 0 ? ghosts.left : u[i - 1];
    const auto& r = i + 1 == n ? ghosts.right : u[i + 1];
    out.push_back(residual_point(level.row(i), f[i], l, u[i], r));
  }
  return out;
}

WordVector restrict_full_weighting(const WordVector& fine) {
  if (fine.size() < 4 || fine.size() % 2 != 0) {
    throw std::invalid_argument(fmt::format("restriction needs an even length >= 4, got {}", fine.size()));
  }
  const DataWord zero = DataWord::from_raw(0, fine.front().format);
  WordVector out;
  for (std::size_t j = 0; j < fine.size() / 2; ++j) {
    out.push_back(restrict_point(j == 0 ? zero : fine[2 * j - 1], fine[2 * j], fine[2 * j + 1]));
  }
  return out;
}

WordVector interpolate_linear(const WordVector& coarse) {
  if (coarse.size() < 2) throw std::invalid_argument("interpolation needs at least 2 coarse points");
  const DataWord zero = DataWord::from_raw(0, coarse.front().format);
  WordVector out;
  for (std::size_t j = 0; j < coarse.size(); ++j) {
    out.push_back(coarse[j]);
    out.push_back(midpoint(coarse[j], j + 1 < coarse.size() ? coarse[j + 1] : zero));
  }
  return out;
}

WordVector add(const WordVector& a, const WordVector& b) {
  if (a.size() != b.size()) throw std::invalid_argument("adding vectors of different lengths");
  WordVector out;
  for (std::size_t i = 0; i < a.size(); ++i) out.push_back(fixed::fixed_add(a[i], b[i]));
  return out;
}

RealVector decode(const WordVector& w) {
  RealVector out;
  for (const auto& x : w) out.push_back(fixed::decode_fixed(x));
  return out;
}

WordVector encode(const RealVector& v, const fixed::FixedPointFormat& format) {
  WordVector out;
  for (double x : v) out.push_back(fixed::encode_fixed(x, format));
  return out;
}

double linf_norm(const RealVector& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

double l2_norm(const RealVector& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

}  // namespace qmg::classical
