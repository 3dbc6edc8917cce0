#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

#include "qmg/sim/sparse_state.hpp"

namespace qmg::resources {

struct CostModel {
  std::uint64_t c_u = 1;  // gate units per U invocation
  std::uint64_t d = 0;    // additive overhead, gate units
  double epsilon = 0.5;   // target data-register accuracy
  double kappa = 2.0;     // error contraction per V-cycle
  double delta = 0.0;     // perturbation sizes, reported only
  double nu = 0.0;

  void validate() const;
};

/// ceil(log2(1/epsilon)) computed without drift on exact powers of two.
std::uint64_t accuracy_bits(double epsilon);

/// (14 C_U + d) ceil(log2(1/epsilon)).
std::uint64_t sharing_cost(const CostModel& model);

/// ceil(ln(1/epsilon) / ln kappa); 0 for epsilon = 1.
std::uint64_t vcycle_count(double kappa, double epsilon);
std::uint64_t vcycle_count(const CostModel& model);

struct PerturbationBudget {
  double delta_max = 0.0;
  double nu_max = 0.0;
};

/// ln kappa / ln(1/epsilon) for both, a budget with unit constant.
PerturbationBudget perturbation_budget(const CostModel& model);

struct ResourceEstimate {
  std::uint64_t sharing_cost = 0;     // one data word
  std::uint64_t gathers_per_sweep = 2;
  std::uint64_t per_sweep_cost = 0;   // gathers_per_sweep * sharing_cost
  std::uint64_t vcycles = 0;
  std::uint64_t total = 0;            // vcycles * per_sweep_cost
  PerturbationBudget budget;
};

ResourceEstimate estimate(const CostModel& model);

struct Reconciliation {
  std::uint64_t bits_shared = 0;
  std::uint64_t expected_qpe_u = 0;  // 14 per bit
  std::uint64_t measured_qpe_u = 0;
  std::uint64_t measured_total_u = 0;
  bool ok = false;
  std::string message;
};

/// Compares a simulator tally with 14 U invocations per shared bit.
Reconciliation reconcile_with_measured(const sim::GateCounter& counter);

nlohmann::json to_json(const CostModel& model);
nlohmann::json to_json(const ResourceEstimate& estimate);
nlohmann::json to_json(const Reconciliation& r);

}  // namespace qmg::resources
