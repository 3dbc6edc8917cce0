#include <cstdlib>
#include <iostream>
#include <map>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "qmg/app/commands.hpp"

namespace {

using qmg::app::RunConfig;

void problem_options(CLI::App* sub, RunConfig& c) {
  sub->add_option("--n", c.n, "index qubits, N = 2^n")->capture_default_str();
  sub->add_option("--dx-exp", c.dx_exp, "grid spacing dx = 2^dx-exp")->capture_default_str();
  sub->add_option("--rhs", c.rhs, "rod | zero | sine")->capture_default_str();
  sub->add_option("--q", c.q, "sine half periods")->capture_default_str();
  sub->add_option("--left", c.left, "left boundary value u_-1");
  sub->add_option("--right", c.right, "right boundary value u_N");
  sub->add_option("--init", c.init, "initial guess: zero | random")->capture_default_str();
  sub->add_option("--init-amplitude", c.init_amplitude, "random guess range [-a, a]")->capture_default_str();
}

void format_options(CLI::App* sub, RunConfig& c) {
  sub->add_option("--k", c.k, "data word bits")->capture_default_str();
  sub->add_option("--fb", c.fb, "fractional bits")->capture_default_str();
}

void cycle_options(CLI::App* sub, RunConfig& c) {
  sub->add_option("--s0", c.s0, "pre-smoothing sweeps")->capture_default_str();
  sub->add_option("--s1", c.s1, "post-smoothing sweeps")->capture_default_str();
  sub->add_option("--levels", c.levels, "grids in the hierarchy")->capture_default_str();
}

void add_options(const std::string& name, CLI::App* sub, RunConfig& c) {
  sub->add_option("--seed", c.seed, "seed of the run's random generator")->capture_default_str();
  sub->add_option("--out", c.out_dir, "output directory (QMG_OUT_DIR overrides)")->capture_default_str();
  if (name == "share-demo") {
    sub->add_option("--alpha", c.alpha, "word at index 0")->capture_default_str();
    sub->add_option("--beta", c.beta, "word at index 1")->capture_default_str();
    sub->add_option("--bits", c.bits, "data register width")->capture_default_str();
  } else if (name == "quantum-jacobi") {
    problem_options(sub, c);
    format_options(sub, c);
    sub->add_option("--sweeps", c.sweeps, "Jacobi sweeps")->capture_default_str();
  } else if (name == "quantum-mg") {
    problem_options(sub, c);
    format_options(sub, c);
    cycle_options(sub, c);
    sub->add_option("--cycles", c.cycles, "V-cycles")->capture_default_str();
    sub->add_option("--coarse-sweeps", c.coarse_sweeps, "smoother sweeps on the coarsest grid")->capture_default_str();
  } else if (name == "classical-jacobi") {
    problem_options(sub, c);
    format_options(sub, c);
    sub->add_option("--arith", c.arith, "real | fixed")->capture_default_str();
    sub->add_option("--sweeps", c.sweeps, "Jacobi sweeps")->capture_default_str();
  } else if (name == "classical-mg") {
    problem_options(sub, c);
    cycle_options(sub, c);
    sub->add_option("--omega", c.omega, "smoother weight")->capture_default_str();
    sub->add_option("--epsilon", c.epsilon, "linf residual target")->capture_default_str();
    sub->add_option("--max-cycles", c.max_cycles, "cycle cap")->capture_default_str();
    sub->add_flag("--study", c.study, "convergence study over tolerances and sizes");
    sub->add_option("--study-epsilons", c.study_epsilons, "study tolerances")->capture_default_str();
    sub->add_option("--scale-lo", c.scale_lo, "smallest study size exponent")->capture_default_str();
    sub->add_option("--scale-hi", c.scale_hi, "largest study size exponent")->capture_default_str();
  } else if (name == "compress-probe") {
    problem_options(sub, c);
    sub->add_option("--fraction", c.fraction, "fraction of modes retained")->capture_default_str();
    sub->add_option("--threshold", c.threshold, "max error allowed at that fraction")->capture_default_str();
  } else if (name == "amplify-demo") {
    sub->add_option("--n", c.n, "index qubits")->capture_default_str();
    sub->add_option("--marked", c.marked, "indices 0..marked-1 form the region")->capture_default_str();
    sub->add_option("--iterations", c.iterations, "Grover iterations")->capture_default_str();
  } else if (name == "resource-estimate") {
    sub->add_option("--cu", c.cu, "gate units per U invocation")->capture_default_str();
    sub->add_option("--d", c.d, "additive overhead, gate units")->capture_default_str();
    sub->add_option("--epsilon", c.epsilon, "target accuracy")->capture_default_str();
    sub->add_option("--kappa", c.kappa, "contraction per V-cycle")->capture_default_str();
    sub->add_option("--k", c.k, "word width of the measured share")->capture_default_str();
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multigrid on digitally encoded quantum states: simulations and classical references"};
  app.set_config("--config", "", "INI file; [subcommand] sections, flags override");
  app.require_subcommand(1);

  std::map<std::string, RunConfig> configs;
  std::map<std::string, CLI::App*> subs;
  for (const auto& name : qmg::app::subcommands()) {
    configs[name] = qmg::app::defaults_for(name);
    subs[name] = app.add_subcommand(name);
    add_options(name, subs[name], configs[name]);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  std::string chosen;
  for (const auto& [name, sub] : subs) {
    if (sub->parsed()) chosen = name;
  }
  RunConfig& config = configs.at(chosen);
  const auto dir = qmg::app::output_directory(config.out_dir, std::getenv("QMG_OUT_DIR"));

  qmg::app::RunOutcome outcome;
  try {
    outcome = qmg::app::run(config);
  } catch (const qmg::app::ConfigError& e) {
    std::cerr << fmt::format("{}: configuration error: {}\n", chosen, e.what());
    return 2;
  } catch (const std::exception& e) {
    std::cerr << fmt::format("{}: integrity failure: {}\n", chosen, e.what());
    try {
      qmg::app::write_artifacts({qmg::app::failure_verdict(config, e.what())}, dir);
    } catch (const std::exception& io) {
      std::cerr << io.what() << '\n';
    }
    return 1;
  }

  try {
    qmg::app::write_artifacts(outcome.artifacts, dir);
  } catch (const std::exception& e) {
    std::cerr << e.what() << '\n';
    return 1;
  }
  std::cout << outcome.summary;
  for (const auto& c : outcome.checks) std::cout << fmt::format("{} {}: {}\n", c.pass ? "PASS" : "FAIL", c.name, c.detail);
  std::cout << fmt::format("verdict {} ({} file(s) in {})\n", outcome.pass() ? "PASS" : "FAIL", outcome.artifacts.size(),
                           dir.string());
  return outcome.pass() ? 0 : 1;
}
