#include "qmg/resources/estimator.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include <fmt/format.h>

namespace qmg::resources {

namespace {

constexpr std::uint64_t kQpeUPerBit = 14;
constexpr std::uint64_t kTotalUPerBit = 28;
// closed-form ratios like ln(1e6)/ln(10) land a few ulps above an integer
constexpr double kCeilSlack = 1e-9;

std::uint64_t ceil_with_slack(double x) {
  if (x <= 0.0) return 0;
  const double r = std::round(x);
  if (std::abs(x - r) <= kCeilSlack * std::max(1.0, r)) return static_cast<std::uint64_t>(r);
  return static_cast<std::uint64_t>(std::ceil(x));
}

void check_epsilon(double epsilon) {
  if (!(epsilon > 0.0 && epsilon <= 1.0)) throw std::invalid_argument(fmt::format("epsilon must be in (0, 1], got {}", epsilon));
}

}  // namespace

void CostModel::validate() const {
  if (c_u < 1) throw std::invalid_argument("C_U must be at least 1");
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw std::invalid_argument(fmt::format("epsilon must be in (0, 1), got {}", epsilon));
  if (!(kappa > 1.0) || !std::isfinite(kappa)) throw std::invalid_argument(fmt::format("kappa must exceed 1, got {}", kappa));
  if (!(delta >= 0.0) || !(nu >= 0.0)) throw std::invalid_argument("perturbation sizes must be non-negative");
}

std::uint64_t accuracy_bits(double epsilon) {
  check_epsilon(epsilon);
  int e = 0;
  const double m = std::frexp(epsilon, &e);
  // epsilon = m 2^e with m in [0.5, 1); exact powers of two have m = 0.5
  if (m == 0.5) return static_cast<std::uint64_t>(1 - e);
  return ceil_with_slack(-std::log2(epsilon));
}

std::uint64_t sharing_cost(const CostModel& model) {
  model.validate();
  const std::uint64_t per_bit = kQpeUPerBit * model.c_u + model.d;
  const std::uint64_t bits = accuracy_bits(model.epsilon);
  if (bits != 0 && per_bit > std::numeric_limits<std::uint64_t>::max() / bits) {
    throw std::overflow_error("sharing cost overflows 64 bits");
  }
  return per_bit * bits;
}

std::uint64_t vcycle_count(double kappa, double epsilon) {
  if (!(kappa > 1.0) || !std::isfinite(kappa)) throw std::invalid_argument(fmt::format("kappa must exceed 1, got {}", kappa));
  check_epsilon(epsilon);
  if (epsilon == 1.0) return 0;
  return ceil_with_slack(std::log(1.0 / epsilon) / std::log(kappa));
}

std::uint64_t vcycle_count(const CostModel& model) {
  model.validate();
  return vcycle_count(model.kappa, model.epsilon);
}

PerturbationBudget perturbation_budget(const CostModel& model) {
  model.validate();
  const double b = std::log(model.kappa) / std::log(1.0 / model.epsilon);
  return {b, b};
}

ResourceEstimate estimate(const CostModel& model) {
  ResourceEstimate e;
  e.sharing_cost = sharing_cost(model);
  e.per_sweep_cost = e.gathers_per_sweep * e.sharing_cost;
  e.vcycles = vcycle_count(model);
  e.total = e.vcycles * e.per_sweep_cost;
  e.budget = perturbation_budget(model);
  return e;
}

Reconciliation reconcile_with_measured(const sim::GateCounter& counter) {
  Reconciliation r;
  r.bits_shared = counter.share_bit_runs;
  r.expected_qpe_u = kQpeUPerBit * r.bits_shared;
  r.measured_qpe_u = counter.qpe_u_invocations;
  r.measured_total_u = counter.u_invocations;
  const bool qpe_ok = r.measured_qpe_u == r.expected_qpe_u;
  const bool total_ok = r.measured_total_u == kTotalUPerBit * r.bits_shared;
  r.ok = qpe_ok && total_ok;
  if (r.ok) {
    r.message = fmt::format("{} bit runs, {} estimation U invocations as expected", r.bits_shared, r.measured_qpe_u);
  } else {
    r.message = fmt::format("{} bit runs: expected {} estimation / {} total U invocations, measured {} / {}",
                            r.bits_shared, r.expected_qpe_u, kTotalUPerBit * r.bits_shared, r.measured_qpe_u,
                            r.measured_total_u);
  }
  return r;
}

nlohmann::json to_json(const CostModel& model) {
  return {{"C_U", model.c_u}, {"d", model.d},         {"epsilon", model.epsilon},
          {"kappa", model.kappa}, {"delta", model.delta}, {"nu", model.nu}};
}

nlohmann::json to_json(const ResourceEstimate& e) {
  return {{"sharing_cost", e.sharing_cost},
          {"gathers_per_sweep", e.gathers_per_sweep},
          {"per_sweep_cost", e.per_sweep_cost},
          {"vcycle_count", e.vcycles},
          {"total_cost", e.total},
          {"perturbation_budget", {{"delta_max", e.budget.delta_max}, {"nu_max", e.budget.nu_max}}},
          {"d_interpretation", "additive overhead in gate units"}};
}

nlohmann::json to_json(const Reconciliation& r) {
  return {{"bits_shared", r.bits_shared},         {"expected_qpe_u_invocations", r.expected_qpe_u},
          {"measured_qpe_u_invocations", r.measured_qpe_u}, {"measured_total_u_invocations", r.measured_total_u},
          {"ok", r.ok},                           {"message", r.message}};
}

}  // namespace qmg::resources
