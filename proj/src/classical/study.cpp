#include "qmg/classical/study.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace qmg::classical {

RealVector random_guess(std::size_t n, std::mt19937_64& rng, double amplitude) {
  std::uniform_real_distribution<double> d(-amplitude, amplitude);
  RealVector u(n);
  for (auto& x : u) x = d(rng);
  return u;
}

double max_contraction(const std::vector<HistoryRow>& history) {
  double m = 0.0;
  for (std::size_t i = 1; i < history.size(); ++i) m = std::max(m, history[i].contraction);
  return m;
}

LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("line fit needs two or more paired points");
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i] / n;
    my += y[i] / n;
  }
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0) throw std::invalid_argument("line fit needs distinct abscissae");
  LinearFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  f.r_squared = syy == 0.0 ? 1.0 : sxy * sxy / (sxx * syy);
  return f;
}

ConvergenceStudy convergence_study(std::size_t n_qubits, int dx_exp, const VCycleConfig& config,
                                   const std::vector<double>& epsilons, std::size_t scale_lo, std::size_t scale_hi,
                                   std::uint64_t seed) {
  if (epsilons.empty()) throw std::invalid_argument("convergence study needs at least one tolerance");
  ConvergenceStudy s;
  s.n_qubits = n_qubits;
  s.epsilons = epsilons;
  const auto depth = [&](std::size_t n) {
    auto cfg = config;
    cfg.levels = config.levels == 0 ? n : std::min(config.levels, n);
    return cfg;
  };
  const auto p = GridProblem::zero(n_qubits, dx_exp);
  std::mt19937_64 rng(seed);
  const auto u0 = random_guess(p.size(), rng);
  const double tightest = *std::min_element(epsilons.begin(), epsilons.end());
  auto run = solve_to_tolerance(p, depth(n_qubits), tightest, u0);
  s.history = run.history;
  s.max_contraction = max_contraction(run.history);
  s.converged = run.converged;

  std::vector<double> x, y;
  for (double eps : epsilons) {
    std::size_t c = 0;
    while (c < run.history.size() && run.history[c].linf_residual >= eps) ++c;
    s.converged = s.converged && c < run.history.size();
    s.cycles.push_back(c);
    x.push_back(std::log10(1.0 / eps));
    y.push_back(static_cast<double>(c));
  }
  if (epsilons.size() >= 2) s.fit = fit_line(x, y);

  double lo = INFINITY, hi = 0.0;
  for (std::size_t n = scale_lo; n <= scale_hi; ++n) {
    const auto q = GridProblem::zero(n, dx_exp);
    const auto r = solve_to_tolerance(q, depth(n), tightest, random_guess(q.size(), rng));
    const double c = max_contraction(r.history);
    s.converged = s.converged && r.converged;
    s.scaling.push_back({n, c});
    lo = std::min(lo, c);
    hi = std::max(hi, c);
  }
  s.scaling_ratio = s.scaling.empty() || lo == 0.0 ? 0.0 : hi / lo;
  return s;
}

CompressionReport probe_solution(const GridProblem& problem, double fraction) {
  problem.validate();
  if (!(fraction > 0.0 && fraction <= 1.0)) throw std::invalid_argument("mode fraction must be in (0, 1]");
  CompressionReport r;
  r.solution = exact_coarse_solve(build_hierarchy(problem, 1).front(), problem.rhs);
  r.curve = compressibility_probe(r.solution);
  r.monotone = true;
  for (std::size_t m = 1; m < r.curve.max_error.size(); ++m) {
    if (r.curve.max_error[m] > r.curve.max_error[m - 1] + 1e-12) r.monotone = false;
  }
  r.mode_budget = static_cast<std::size_t>(std::floor(fraction * static_cast<double>(problem.size())));
  r.error_at_budget = r.curve.max_error[r.mode_budget];
  return r;
}

}  // namespace qmg::classical
