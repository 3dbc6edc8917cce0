#include "qmg/classical/problem.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include <fmt/format.h>

namespace qmg::classical {

double GridProblem::dx() const { return std::ldexp(1.0, dx_exp); }

void GridProblem::validate() const {
  if (n_qubits < 1 || n_qubits > 24) throw std::invalid_argument(fmt::format("n must be in [1, 24], got {}", n_qubits));
  if (dx_exp < -30 || dx_exp > 30) throw std::invalid_argument(fmt::format("dx exponent {} out of range", dx_exp));
  if (rhs.size() != size()) {
    throw std::invalid_argument(fmt::format("right-hand side has {} entries for {} grid points", rhs.size(), size()));
  }
  for (double v : rhs) {
    if (!std::isfinite(v)) throw std::invalid_argument("right-hand side must be finite");
  }
  if (!std::isfinite(ghosts.left) || !std::isfinite(ghosts.right)) {
    throw std::invalid_argument("boundary values must be finite");
  }
}

GridProblem GridProblem::rod(std::size_t n_qubits, int dx_exp, Ghosts ghosts) {
  GridProblem p{n_qubits, dx_exp, ghosts, std::vector<double>(std::size_t{1} << n_qubits, 0.0)};
  p.validate();
  return p;
}

GridProblem GridProblem::zero(std::size_t n_qubits, int dx_exp) { return rod(n_qubits, dx_exp, {0.0, 0.0}); }

GridProblem GridProblem::sine(std::size_t n_qubits, int dx_exp, int q, Ghosts ghosts) {
  const std::size_t n = std::size_t{1} << n_qubits;
  std::vector<double> f(n);
  for (std::size_t i = 0; i < n; ++i) {
    f[i] = std::sin(std::numbers::pi * q * static_cast<double>(i + 1) / static_cast<double>(n + 1));
  }
  return custom(n_qubits, dx_exp, std::move(f), ghosts);
}

GridProblem GridProblem::custom(std::size_t n_qubits, int dx_exp, std::vector<double> rhs, Ghosts ghosts) {
  GridProblem p{n_qubits, dx_exp, ghosts, std::move(rhs)};
  p.validate();
  return p;
}

StencilRow Level::row(std::size_t i) const {
  StencilRow r;
  r.h_exp = h_exp;
  if (i == 0 && index > 0) r.diag = -((std::int64_t{1} << index) + 1);
  return r;
}

std::vector<Level> build_hierarchy(const GridProblem& problem, std::size_t levels) {
  if (levels < 1) throw std::invalid_argument("a hierarchy needs at least one level");
  if (levels > problem.n_qubits) {
    throw std::invalid_argument(
        fmt::format("{} levels on N = {} would leave fewer than 2 coarse points", levels, problem.size()));
  }
  std::vector<Level> out;
  for (std::size_t l = 0; l < levels; ++l) {
    Level lv;
    lv.index = l;
    lv.size = problem.size() >> l;
    lv.h_exp = problem.dx_exp + static_cast<int>(l);
    lv.ghosts = l == 0 ? problem.ghosts : Ghosts{};
    out.push_back(lv);
  }
  return out;
}

FixedProblem encode_problem(const GridProblem& problem, const fixed::FixedPointFormat& format) {
  FixedProblem p{fixed::encode_fixed(problem.ghosts.left, format), fixed::encode_fixed(problem.ghosts.right, format),
                 {}};
  for (double v : problem.rhs) p.rhs.push_back(fixed::encode_fixed(v, format));
  return p;
}

}  // namespace qmg::classical
