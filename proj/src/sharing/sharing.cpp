#include "qmg/sharing/sharing.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "qmg/sim/operations.hpp"

namespace qmg::sharing {

using sim::BasisLabel;

namespace {

// long pipelines accumulate ~1e-15 amplitude drift per protocol run
constexpr double kReproductionTolerance = 1e-9;

void toggle_ancilla(SparseState& state, const SharingContext& ctx) {
  const std::size_t d = ctx.data_qubit();
  const std::size_t a = ctx.ancilla_qubit();
  const Register touched[] = {ctx.registers().ancilla};
  sim::apply_branch_function(
      state, [d, a](BasisLabel& l) { l.set_bit(a, l.bit(a) != !l.bit(d)); }, touched);
}

std::vector<std::size_t> qubits_outside(const SparseState& state, const Register& reg) {
  std::vector<std::size_t> out;
  for (std::size_t q = 0; q < state.layout().width(); ++q) {
    if (q < reg.offset || q >= reg.end()) out.push_back(q);
  }
  return out;
}

void inverse_grover_iterate(SparseState& state, const SharingContext& ctx) {
  sim::scale(state, -1.0);
  grover_diffusion(state, ctx);
  oracle_S_xi(state, ctx);
}

double odd_phase_probability(const SparseState& state, const Register& phase) {
  double p = 0.0;
  for (const auto& [m, prob] : sim::register_distribution(state, phase)) {
    if (m % 2 != 0) p += prob;
  }
  return p;
}

bool field_zero(const BasisLabel& l, const Register& r) { return l.field(r.offset, r.width) == 0; }

void run_bit(SparseState& state, const SharingContext& ctx, BitShareReport* report) {
  apply_G(state, ctx);
  const auto u_before = state.counter().u_invocations;
  const auto est = phase_estimate_3bit(state, ctx);
  const auto qpe_u = state.counter().u_invocations - u_before;
  copy_phase_and_fix_sign(state, ctx);
  uncompute(state, ctx);
  state.counter().share_bit_runs += 1;
  if (report != nullptr) {
    report->qpe_u_invocations = qpe_u;
    report->total_u_invocations = state.counter().u_invocations - u_before;
    report->off_support_probability = est.off_support_probability;
  }
}

void write_partner_words(SparseState& state, const ShareResult& r, bool require_clean) {
  const auto& regs = r.runs.front().registers();
  const std::size_t pairing = regs.index.qubit(regs.pairing_bit);
  std::vector<Register> copies;
  for (const auto& c : r.runs) copies.push_back(c.copy());
  const Register data = regs.data;
  const Register lo = r.dest_low;
  const Register hi = r.dest_high;
  const Register touched[] = {lo, hi};
  sim::apply_branch_function(
      state,
      [&](BasisLabel& l) {
        const Register& dest = l.bit(pairing) ? hi : lo;
        if (require_clean && !field_zero(l, dest)) {
          throw sim::IntegrityError(fmt::format("neighbor destination '{}' is not zero", dest.name));
        }
        std::uint64_t word = 0;
        for (std::size_t b = 0; b < copies.size(); ++b) {
          const int alpha = l.bit(data.qubit(b)) ? 1 : 0;
          const auto m = static_cast<unsigned>(l.field(copies[b].offset, copies[b].width));
          word |= static_cast<std::uint64_t>(decode_neighbor_bit(alpha, PhaseValue{m})) << b;
        }
        l.xor_field(dest.offset, dest.width, word);
      },
      touched);
}

}  // namespace

SharingContext SharingContext::capture(const SparseState& state, const SharingRegisters& regs, std::size_t data_bit,
                                       const Register& copy) {
  if (regs.ancilla.width != 1) throw std::invalid_argument("sharing ancilla must be one qubit");
  if (regs.phase.width != 3) throw std::invalid_argument("sharing phase register must be three qubits");
  if (copy.width != 3) throw std::invalid_argument("phase copy register must be three qubits");
  if (data_bit >= regs.data.width) throw std::out_of_range("data bit outside the data register");
  if (regs.pairing_bit >= regs.index.width) throw std::out_of_range("pairing bit outside the index register");
  const Register scratch[] = {regs.ancilla, regs.phase, copy};
  auto u = sim::PreparationOracle::capture(state, regs.index, scratch);
  const double f = u.reproduction_fidelity(state);
  if (f < 1.0 - kReproductionTolerance) {
    throw sim::IntegrityError(fmt::format("U reproduces the state only to fidelity {:.17g}", f));
  }
  return SharingContext(regs, data_bit, copy, std::move(u));
}

void apply_G(SparseState& state, const SharingContext& ctx) {
  for (const auto& b : state.branches()) {
    if (b.label.bit(ctx.ancilla_qubit())) throw sim::IntegrityError("sharing ancilla is not |0> before G");
  }
  toggle_ancilla(state, ctx);
}

void oracle_S_xi(SparseState& state, const SharingContext& ctx) {
  const std::size_t a = ctx.ancilla_qubit();
  sim::apply_phase_oracle(state, [a](const BasisLabel& l) { return l.bit(a); });
}

void grover_diffusion(SparseState& state, const SharingContext& ctx) {
  const std::size_t p = ctx.pairing_qubit();
  const std::size_t pairing[] = {p};
  toggle_ancilla(state, ctx);
  ctx.preparation().apply(state);
  sim::apply_single_qubit_gate(state, p, sim::gates::hadamard());
  sim::reflection_about_zero(state, pairing);
  sim::apply_single_qubit_gate(state, p, sim::gates::hadamard());
  ctx.preparation().apply(state);
  toggle_ancilla(state, ctx);
}

void grover_iterate(SparseState& state, const SharingContext& ctx) {
  oracle_S_xi(state, ctx);
  grover_diffusion(state, ctx);
  sim::scale(state, -1.0);
}

void apply_qft(SparseState& state, const Register& reg, bool inverse) {
  struct Gate {
    enum Kind { kH, kCPhase, kSwap } kind;
    std::size_t a;
    std::size_t b;
    double theta;
  };
  std::vector<Gate> gates;
  const std::size_t n = reg.width;
  for (std::size_t j = n; j-- > 0;) {
    gates.push_back({Gate::kH, reg.qubit(j), 0, 0.0});
    for (std::size_t l = j; l-- > 0;) {
      gates.push_back({Gate::kCPhase, reg.qubit(l), reg.qubit(j), std::numbers::pi / std::ldexp(1.0, int(j - l))});
    }
  }
  for (std::size_t i = 0; i < n / 2; ++i) gates.push_back({Gate::kSwap, reg.qubit(i), reg.qubit(n - 1 - i), 0.0});
  if (inverse) std::reverse(gates.begin(), gates.end());

  const Register touched[] = {reg};
  for (const auto& g : gates) {
    switch (g.kind) {
      case Gate::kH:
        sim::apply_single_qubit_gate(state, g.a, sim::gates::hadamard());
        break;
      case Gate::kCPhase: {
        const std::size_t control[] = {g.a};
        sim::apply_single_qubit_gate(state, g.b, sim::gates::phase(inverse ? -g.theta : g.theta), control);
        break;
      }
      case Gate::kSwap:
        sim::apply_branch_function(
            state,
            [a = g.a, b = g.b](BasisLabel& l) {
              const bool x = l.bit(a);
              l.set_bit(a, l.bit(b));
              l.set_bit(b, x);
            },
            touched);
        break;
    }
  }
}

PhaseEstimateReport phase_estimate_3bit(SparseState& state, const SharingContext& ctx) {
  const Register& phase = ctx.registers().phase;
  for (const auto& b : state.branches()) {
    if (!field_zero(b.label, phase)) throw sim::IntegrityError("phase register is not zero before estimation");
  }
  const auto u_before = state.counter().u_invocations;
  for (std::size_t j = 0; j < 3; ++j) sim::apply_single_qubit_gate(state, phase.qubit(j), sim::gates::hadamard());
  const auto targets = qubits_outside(state, phase);
  for (std::size_t j = 0; j < 3; ++j) {
    const std::size_t control[] = {phase.qubit(j)};
    sim::apply_controlled(state, control, targets, [&ctx, j](SparseState& sub) {
      for (std::size_t k = 0; k < (std::size_t{1} << j); ++k) grover_iterate(sub, ctx);
    });
  }
  apply_qft(state, phase, true);
  state.counter().qpe_u_invocations += state.counter().u_invocations - u_before;

  PhaseEstimateReport report;
  report.off_support_probability = odd_phase_probability(state, phase);
  if (report.off_support_probability > kOffSupportTolerance) {
    throw sim::IntegrityError(fmt::format("phase estimate has probability {:.3g} off the support {{0,2,4,6}}",
                                          report.off_support_probability));
  }
  return report;
}

void inverse_phase_estimate_3bit(SparseState& state, const SharingContext& ctx) {
  const Register& phase = ctx.registers().phase;
  apply_qft(state, phase, false);
  const auto targets = qubits_outside(state, phase);
  for (std::size_t j = 3; j-- > 0;) {
    const std::size_t control[] = {phase.qubit(j)};
    sim::apply_controlled(state, control, targets, [&ctx, j](SparseState& sub) {
      for (std::size_t k = 0; k < (std::size_t{1} << j); ++k) inverse_grover_iterate(sub, ctx);
    });
  }
  for (std::size_t j = 3; j-- > 0;) sim::apply_single_qubit_gate(state, phase.qubit(j), sim::gates::hadamard());
}

void copy_phase_and_fix_sign(SparseState& state, const SharingContext& ctx) {
  const Register phase = ctx.registers().phase;
  const Register copy = ctx.copy();
  const double odd = odd_phase_probability(state, phase);
  if (odd > kOffSupportTolerance) {
    throw sim::IntegrityError(fmt::format("odd phase value with probability {:.3g} cannot be decoded", odd));
  }
  const Register touched[] = {copy};
  sim::apply_branch_function(
      state,
      [phase, copy](BasisLabel& l) {
        const PhaseValue v{static_cast<unsigned>(l.field(phase.offset, phase.width))};
        l.xor_field(copy.offset, copy.width, v.magnitude());
      },
      touched);
}

void uncompute(SparseState& state, const SharingContext& ctx) {
  inverse_phase_estimate_3bit(state, ctx);
  toggle_ancilla(state, ctx);
  const auto& regs = ctx.registers();
  double residual = 0.0;
  for (const auto& b : state.branches()) {
    if (!field_zero(b.label, regs.phase) || b.label.bit(ctx.ancilla_qubit())) residual += std::norm(b.amplitude);
  }
  if (residual > kOffSupportTolerance) {
    throw sim::IntegrityError(fmt::format("scratch registers not restored after sharing (weight {:.3g})", residual));
  }
  if (residual > 0.0) {
    // floating-point leftovers above the prune threshold; drop them
    auto branches = state.take_branches();
    std::erase_if(branches, [&](const sim::Branch& b) {
      return !field_zero(b.label, regs.phase) || b.label.bit(ctx.ancilla_qubit());
    });
    state.assign(std::move(branches));
    state.normalize();
  }
}

int decode_neighbor_bit(int alpha, PhaseValue phi) {
  if (alpha != 0 && alpha != 1) throw std::invalid_argument("data bit must be 0 or 1");
  const unsigned c = phi.magnitude();
  if (c % 2 != 0) throw sim::IntegrityError(fmt::format("phase record {} is not a multiple of 1/4", phi.m));
  const int beta = static_cast<int>(c / 2) - alpha;
  if (beta != 0 && beta != 1) {
    throw sim::IntegrityError(fmt::format("phase record {} is inconsistent with data bit {}", phi.m, alpha));
  }
  return beta;
}

BitShareReport share_bit(SparseState& state, const SharingContext& ctx) {
  for (const auto& b : state.branches()) {
    if (!field_zero(b.label, ctx.copy())) throw sim::IntegrityError("phase copy register is not zero");
  }
  BitShareReport report;
  run_bit(state, ctx, &report);
  return report;
}

void unshare_bit(SparseState& state, const SharingContext& ctx) { run_bit(state, ctx, nullptr); }

ShareResult share_data_registers(SparseState& state, const SharingRegisters& regs, const Register& dest_low,
                                 const Register& dest_high, const std::string& copy_prefix) {
  if (dest_low.width < regs.data.width || dest_high.width < regs.data.width) {
    throw std::invalid_argument("neighbor destinations narrower than the data register");
  }
  std::vector<Register> copies;
  for (std::size_t b = 0; b < regs.data.width; ++b) {
    copies.push_back(state.append_register(fmt::format("{}.phi{}", copy_prefix, b), 3));
  }
  ShareResult result{{}, dest_low, dest_high, 0, 0, 0.0};
  for (std::size_t b = 0; b < regs.data.width; ++b) {
    result.runs.push_back(SharingContext::capture(state, regs, b, copies[b]));
    const auto r = share_bit(state, result.runs.back());
    result.qpe_u_invocations += r.qpe_u_invocations;
    result.total_u_invocations += r.total_u_invocations;
    result.max_off_support_probability = std::max(result.max_off_support_probability, r.off_support_probability);
  }
  write_partner_words(state, result, true);
  return result;
}

void unshare_data_registers(SparseState& state, const ShareResult& result) {
  if (result.runs.empty()) return;
  write_partner_words(state, result, false);
  for (auto it = result.runs.rbegin(); it != result.runs.rend(); ++it) unshare_bit(state, *it);
}

}  // namespace qmg::sharing
