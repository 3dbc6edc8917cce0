#include "qmg/app/config.hpp"

#include <algorithm>

#include <fmt/format.h>

namespace qmg::app {

RunConfig defaults_for(const std::string& command) {
  RunConfig c;
  c.command = command;
  if (command == "quantum-mg") {
    c.n = 3;
    c.s0 = 1;
    c.s1 = 1;
  } else if (command == "classical-mg") {
    c.n = 10;
    c.rhs = "zero";
    c.init = "random";
    c.init_amplitude = 1.0;
    c.levels = 0;
  } else if (command == "compress-probe") {
    c.n = 8;
    c.dx_exp = -8;
    c.rhs = "sine";
  } else if (command == "resource-estimate") {
    c.epsilon = 0.5;
  } else if (std::find(subcommands().begin(), subcommands().end(), command) == subcommands().end()) {
    throw ConfigError(fmt::format("unknown subcommand '{}'", command));
  }
  return c;
}

namespace {

void require(bool ok, const std::string& message) {
  if (!ok) throw ConfigError(message);
}

}  // namespace

classical::GridProblem make_problem(const RunConfig& c) {
  require(c.n >= 1 && c.n <= 16, fmt::format("n must be in [1, 16], got {}", c.n));
  require(c.dx_exp >= -30 && c.dx_exp <= 30, fmt::format("dx exponent must be in [-30, 30], got {}", c.dx_exp));
  classical::GridProblem p;
  if (c.rhs == "rod") {
    p = classical::GridProblem::rod(c.n, c.dx_exp);
  } else if (c.rhs == "zero") {
    p = classical::GridProblem::zero(c.n, c.dx_exp);
  } else if (c.rhs == "sine") {
    require(c.q >= 1, fmt::format("sine frequency q must be positive, got {}", c.q));
    p = classical::GridProblem::sine(c.n, c.dx_exp, c.q);
  } else {
    throw ConfigError(fmt::format("rhs must be rod, zero or sine, got '{}'", c.rhs));
  }
  if (c.left) p.ghosts.left = *c.left;
  if (c.right) p.ghosts.right = *c.right;
  try {
    p.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return p;
}

fixed::FixedPointFormat make_format(const RunConfig& c) {
  fixed::FixedPointFormat f{c.k, c.fb};
  try {
    f.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(fmt::format("number format k={} fb={}: {}", c.k, c.fb, e.what()));
  }
  return f;
}

void validate(const RunConfig& c) {
  require(std::find(subcommands().begin(), subcommands().end(), c.command) != subcommands().end(),
          fmt::format("unknown subcommand '{}'", c.command));
  require(c.init == "zero" || c.init == "random", fmt::format("init must be zero or random, got '{}'", c.init));
  require(c.init_amplitude >= 0.0, "init amplitude must be non-negative");
  require(!c.out_dir.empty(), "output directory must not be empty");
  const auto& cmd = c.command;
  if (cmd == "share-demo") {
    require(c.bits >= 1 && c.bits <= 16, fmt::format("bits must be in [1, 16], got {}", c.bits));
    const std::uint64_t limit = std::uint64_t{1} << c.bits;
    require(c.alpha < limit && c.beta < limit, fmt::format("alpha and beta must fit in {} bits", c.bits));
    return;
  }
  if (cmd == "amplify-demo") {
    require(c.n >= 1 && c.n <= 16, fmt::format("n must be in [1, 16], got {}", c.n));
    require(c.marked <= (std::size_t{1} << c.n), "more marked indices than grid points");
    return;
  }
  if (cmd == "resource-estimate") {
    require(c.cu >= 1, "cu must be at least 1");
    require(c.epsilon > 0.0 && c.epsilon < 1.0, fmt::format("epsilon must be in (0, 1), got {}", c.epsilon));
    require(c.kappa > 1.0, fmt::format("kappa must exceed 1, got {}", c.kappa));
    require(c.k >= 1 && c.k <= 32, fmt::format("k must be in [1, 32], got {}", c.k));
    return;
  }
  make_problem(c);
  if (cmd == "compress-probe") {
    require(c.fraction > 0.0 && c.fraction <= 1.0, "fraction must be in (0, 1]");
    require(c.threshold > 0.0, "threshold must be positive");
    return;
  }
  if (cmd == "classical-jacobi") {
    require(c.arith == "real" || c.arith == "fixed", fmt::format("arith must be real or fixed, got '{}'", c.arith));
    if (c.arith == "fixed") make_format(c);
    return;
  }
  if (cmd == "classical-mg") {
    require(c.levels <= c.n, fmt::format("levels must be in [0, {}], got {}", c.n, c.levels));
    require(c.omega > 0.0 && c.omega <= 1.0, fmt::format("omega must be in (0, 1], got {}", c.omega));
    require(c.epsilon > 0.0, "epsilon must be positive");
    require(c.max_cycles >= 1, "max cycles must be positive");
    if (c.study) {
      require(c.rhs == "zero", "the convergence study runs on the zero-source problem; set rhs = zero");
      require(c.study_epsilons.size() >= 2, "the convergence study needs two or more tolerances");
      for (double e : c.study_epsilons) require(e > 0.0, "study tolerances must be positive");
      require(c.scale_lo >= 1 && c.scale_lo <= c.scale_hi && c.scale_hi <= 16, "study sizes must satisfy 1 <= lo <= hi <= 16");
    }
    return;
  }
  make_format(c);
  require(c.n <= 6, fmt::format("quantum pipelines are limited to n <= 6, got {}", c.n));
  if (cmd == "quantum-jacobi") {
    require(c.sweeps <= 64, "at most 64 quantum sweeps");
    return;
  }
  // quantum-mg
  require(c.levels >= 1 && c.levels <= c.n, fmt::format("levels must be in [1, {}], got {}", c.n, c.levels));
  require(c.cycles >= 1 && c.cycles <= 8, "quantum V-cycles must be in [1, 8]");
  require(c.coarse_sweeps >= 1, "coarse sweeps must be positive");
}

nlohmann::json to_json(const RunConfig& c) {
  nlohmann::json j;
  j["command"] = c.command;
  j["n"] = c.n;
  j["dx_exp"] = c.dx_exp;
  j["rhs"] = c.rhs;
  j["q"] = c.q;
  j["left"] = c.left ? nlohmann::json(*c.left) : nlohmann::json(nullptr);
  j["right"] = c.right ? nlohmann::json(*c.right) : nlohmann::json(nullptr);
  j["init"] = c.init;
  j["init_amplitude"] = c.init_amplitude;
  j["k"] = c.k;
  j["fb"] = c.fb;
  j["arith"] = c.arith;
  j["sweeps"] = c.sweeps;
  j["cycles"] = c.cycles;
  j["max_cycles"] = c.max_cycles;
  j["s0"] = c.s0;
  j["s1"] = c.s1;
  j["levels"] = c.levels;
  j["coarse_sweeps"] = c.coarse_sweeps;
  j["omega"] = c.omega;
  j["epsilon"] = c.epsilon;
  j["study"] = c.study;
  j["study_epsilons"] = c.study_epsilons;
  j["scale_lo"] = c.scale_lo;
  j["scale_hi"] = c.scale_hi;
  j["alpha"] = c.alpha;
  j["beta"] = c.beta;
  j["bits"] = c.bits;
  j["marked"] = c.marked;
  j["iterations"] = c.iterations;
  j["fraction"] = c.fraction;
  j["threshold"] = c.threshold;
  j["cu"] = c.cu;
  j["d"] = c.d;
  j["kappa"] = c.kappa;
  j["seed"] = c.seed;
  return j;
}

}  // namespace qmg::app
