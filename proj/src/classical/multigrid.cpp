#include "qmg/classical/multigrid.hpp"

#include <cmath>
#include <sstream>

#include <fmt/format.h>

namespace qmg::classical {

using fixed::DataWord;

void VCycleConfig::validate(const GridProblem& problem) const {
  problem.validate();
  if (levels < 1 || levels > problem.n_qubits) {
    throw std::invalid_argument(
        fmt::format("levels must be in [1, {}] for N = {}, got {}", problem.n_qubits, problem.size(), levels));
  }
  if (mode == Arithmetic::kReal && !(omega > 0.0 && omega <= 1.0)) {
    throw std::invalid_argument(fmt::format("smoother weight must be in (0, 1], got {}", omega));
  }
  if (mode == Arithmetic::kFixed) {
    format.validate();
    if (omega != 1.0) throw std::invalid_argument("fixed-point smoothing is undamped; set omega = 1");
    if (coarse_sweep_cap < 1) throw std::invalid_argument("coarse sweep cap must be positive");
  }
}

RealVector exact_coarse_solve(const Level& level, const RealVector& f) {
  const std::size_t n = level.size;
  if (f.size() != n) throw std::invalid_argument("coarse right-hand side length mismatch");
  const double hh = std::ldexp(1.0, 2 * level.h_exp);
  // rows scaled by H^2: lower x_{i-1} + diag x_i + upper x_{i+1} = f_i H^2, ghosts moved right
  std::vector<double> c(n), d(n);
  double prev_c = 0.0;
  double prev_d = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto row = level.row(i);
    double rhs = f[i] * hh;
    if (i == 0) rhs -= row.lower * level.ghosts.left;
    if (i + 1 == n) rhs -= row.upper * level.ghosts.right;
    const double a = i == 0 ? 0.0 : static_cast<double>(row.lower);
    const double denom = static_cast<double>(row.diag) - a * prev_c;
    c[i] = i + 1 == n ? 0.0 : row.upper / denom;
    d[i] = (rhs - a * prev_d) / denom;
    prev_c = c[i];
    prev_d = d[i];
  }
  RealVector x(n);
  x[n - 1] = d[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) x[i] = d[i] - c[i] * x[i + 1];
  return x;
}

FixedCoarseSolve fixed_coarse_solve(const Level& level, const LevelGhosts& ghosts, const WordVector& f,
                                    const WordVector& u0, std::size_t cap) {
  FixedCoarseSolve out{u0, 0, false};
  while (out.sweeps < cap) {
    auto next = jacobi_step(level, ghosts, f, out.u);
    if (next == out.u) {
      out.stationary = true;
      return out;
    }
    out.u = std::move(next);
    ++out.sweeps;
  }
  out.stationary = jacobi_step(level, ghosts, f, out.u) == out.u;
  return out;
}

namespace {

RealVector real_cycle(const std::vector<Level>& levels, std::size_t l, const RealVector& f, RealVector u,
                      const VCycleConfig& cfg) {
  const Level& level = levels[l];
  if (l + 1 == levels.size()) return exact_coarse_solve(level, f);
  for (std::size_t s = 0; s < cfg.s0; ++s) u = weighted_jacobi_step(level, f, u, cfg.omega);
  const auto fc = restrict_full_weighting(residual(level, f, u));
  const auto ec = real_cycle(levels, l + 1, fc, RealVector(fc.size(), 0.0), cfg);
  const auto e = interpolate_linear(ec);
  for (std::size_t i = 0; i < u.size(); ++i) u[i] += e[i];
  for (std::size_t s = 0; s < cfg.s1; ++s) u = weighted_jacobi_step(level, f, u, cfg.omega);
  return u;
}

WordVector fixed_cycle(const std::vector<Level>& levels, std::size_t l, const LevelGhosts& ghosts, const WordVector& f,
                       WordVector u, const VCycleConfig& cfg) {
  const Level& level = levels[l];
  if (l + 1 == levels.size()) return fixed_coarse_solve(level, ghosts, f, u, cfg.coarse_sweep_cap).u;
  for (std::size_t s = 0; s < cfg.s0; ++s) u = jacobi_step(level, ghosts, f, u);
  const auto fc = restrict_full_weighting(residual(level, ghosts, f, u));
  const DataWord zero = DataWord::from_raw(0, cfg.format);
  const auto ec = fixed_cycle(levels, l + 1, {zero, zero}, fc, WordVector(fc.size(), zero), cfg);
  u = add(u, interpolate_linear(ec));
  for (std::size_t s = 0; s < cfg.s1; ++s) u = jacobi_step(level, ghosts, f, u);
  return u;
}

}  // namespace

RealVector v_cycle(const GridProblem& problem, const RealVector& u, const VCycleConfig& config) {
  config.validate(problem);
  if (config.mode != Arithmetic::kReal) throw std::invalid_argument("real V-cycle called with a fixed-point config");
  if (u.size() != problem.size()) throw std::invalid_argument("initial guess length mismatch");
  return real_cycle(build_hierarchy(problem, config.levels), 0, problem.rhs, u, config);
}

WordVector v_cycle(const GridProblem& problem, const WordVector& u, const VCycleConfig& config) {
  config.validate(problem);
  if (config.mode != Arithmetic::kFixed) throw std::invalid_argument("fixed V-cycle called with a real config");
  if (u.size() != problem.size()) throw std::invalid_argument("initial guess length mismatch");
  const auto fp = encode_problem(problem, config.format);
  return fixed_cycle(build_hierarchy(problem, config.levels), 0, {fp.ghost_left, fp.ghost_right}, fp.rhs, u, config);
}

SolveResult solve_to_tolerance(const GridProblem& problem, const VCycleConfig& config, double epsilon, RealVector u0,
                               std::size_t max_cycles) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("tolerance must be positive");
  SolveResult out;
  out.u = std::move(u0);
  const auto record = [&](std::size_t cycle) {
    const auto r = residual(problem, out.u);
    HistoryRow row{cycle, linf_norm(r), l2_norm(r), 0.0};
    if (!out.history.empty() && out.history.back().linf_residual > 0.0) {
      row.contraction = row.linf_residual / out.history.back().linf_residual;
    }
    out.history.push_back(row);
    return row.linf_residual;
  };
  double r = record(0);
  while (r >= epsilon && out.cycles < max_cycles) {
    out.u = v_cycle(problem, out.u, config);
    ++out.cycles;
    r = record(out.cycles);
  }
  out.converged = r < epsilon;
  return out;
}

std::string history_csv(const std::vector<HistoryRow>& history) {
  std::ostringstream out;
  out << "cycle,linf_residual,l2_residual,contraction_factor\n";
  for (const auto& h : history) {
    out << fmt::format("{},{:.17g},{:.17g},{:.17g}\n", h.cycle, h.linf_residual, h.l2_residual, h.contraction);
  }
  return out.str();
}

}  // namespace qmg::classical
