#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "qmg/classical/problem.hpp"
#include "qmg/encoding/fixed_point.hpp"

namespace qmg::app {

/// Invalid configuration; the driver exits with status 2.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline const std::vector<std::string>& subcommands() {
  static const std::vector<std::string> names{"share-demo",   "quantum-jacobi", "quantum-mg",   "classical-jacobi",
                                              "classical-mg", "compress-probe", "amplify-demo", "resource-estimate"};
  return names;
}

/// Everything a run depends on. Fields a subcommand does not use are still
/// echoed in its verdict.
struct RunConfig {
  std::string command;

  // problem: N = 2^n points, dx = 2^dx_exp
  std::size_t n = 2;
  int dx_exp = 0;
  std::string rhs = "rod";  // rod | zero | sine
  int q = 2;                // sine frequency
  std::optional<double> left;
  std::optional<double> right;
  std::string init = "zero";  // zero | random
  double init_amplitude = 0.5;

  // number format
  int k = 8;
  int fb = 6;

  // solvers
  std::string arith = "real";  // classical-jacobi only: real | fixed
  std::size_t sweeps = 5;
  std::size_t cycles = 1;
  std::size_t max_cycles = 200;
  std::size_t s0 = 2;
  std::size_t s1 = 2;
  std::size_t levels = 3;  // 0: full hierarchy
  std::size_t coarse_sweeps = 32;
  double omega = 2.0 / 3.0;
  double epsilon = 1e-8;
  bool study = false;
  std::vector<double> study_epsilons{1e-4, 1e-8, 1e-12};
  std::size_t scale_lo = 5;
  std::size_t scale_hi = 12;

  // sharing demo
  std::uint64_t alpha = 0;
  std::uint64_t beta = 1;
  std::size_t bits = 1;

  // amplification demo
  std::size_t marked = 1;
  std::size_t iterations = 1;

  // compression probe
  double fraction = 0.1;
  double threshold = 1e-3;

  // resources
  std::uint64_t cu = 1;
  std::uint64_t d = 0;
  double kappa = 2.0;  // epsilon above is the accuracy target

  std::uint64_t seed = 1;
  std::string out_dir = "qmg_out";
};

/// Subcommand defaults for the demonstrated configurations.
RunConfig defaults_for(const std::string& command);

/// Rejects configurations a module would refuse, with the offending field named.
void validate(const RunConfig& config);

classical::GridProblem make_problem(const RunConfig& config);
fixed::FixedPointFormat make_format(const RunConfig& config);

nlohmann::json to_json(const RunConfig& config);

}  // namespace qmg::app
