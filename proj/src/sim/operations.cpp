#include "qmg/sim/operations.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <fmt/format.h>

namespace qmg::sim {

namespace gates {

Matrix2 hadamard() {
  const double s = 1.0 / std::numbers::sqrt2;
  return {{{Amplitude{s}, Amplitude{s}}, {Amplitude{s}, Amplitude{-s}}}};
}

Matrix2 pauli_x() { return {{{Amplitude{0}, Amplitude{1}}, {Amplitude{1}, Amplitude{0}}}}; }

Matrix2 pauli_z() { return {{{Amplitude{1}, Amplitude{0}}, {Amplitude{0}, Amplitude{-1}}}}; }

Matrix2 phase(double theta) {
  return {{{Amplitude{1}, Amplitude{0}}, {Amplitude{0}, std::polar(1.0, theta)}}};
}

Matrix2 adjoint(const Matrix2& m) {
  return {{{std::conj(m[0][0]), std::conj(m[1][0])}, {std::conj(m[0][1]), std::conj(m[1][1])}}};
}

}  // namespace gates

namespace {

bool controls_set(const BasisLabel& label, std::span<const std::size_t> controls) {
  return std::all_of(controls.begin(), controls.end(), [&](std::size_t q) { return label.bit(q); });
}

void check_unitary(const Matrix2& u) {
  for (int r = 0; r < 2; ++r) {
    for (int c = 0; c < 2; ++c) {
      Amplitude dot = std::conj(u[0][r]) * u[0][c] + std::conj(u[1][r]) * u[1][c];
      const Amplitude expected = r == c ? Amplitude{1.0} : Amplitude{0.0};
      if (std::abs(dot - expected) > 1e-12) {
        throw std::invalid_argument("gate matrix is not unitary within 1e-12");
      }
    }
  }
}

void check_qubit(const SparseState& state, std::size_t q) {
  if (q >= state.layout().width()) {
    throw std::out_of_range(fmt::format("qubit {} outside layout of width {}", q, state.layout().width()));
  }
}

}  // namespace

SparseState prepare_uniform_index(RegisterLayout layout, std::string_view index_register) {
  const Register index = layout.at(index_register);
  if (index.width > 30) {
    throw CapacityError(fmt::format("uniform superposition over {} index qubits is not tractable", index.width));
  }
  const std::uint64_t n_points = std::uint64_t{1} << index.width;
  const double amp = 1.0 / std::sqrt(static_cast<double>(n_points));
  std::vector<Branch> branches;
  branches.reserve(n_points);
  for (std::uint64_t i = 0; i < n_points; ++i) {
    BasisLabel label(layout.width());
    label.set_field(index.offset, index.width, i);
    branches.push_back(Branch{std::move(label), Amplitude{amp}});
  }
  auto state = SparseState::from_branches(std::move(layout), std::move(branches));
  state.counter().single_qubit += index.width;
  return state;
}

void apply_branch_function(SparseState& state, const BranchFunction& f,
                           std::span<const Register> touched) {
  const BasisLabel touched_mask = state.layout().mask(touched);
  // work on a copy so a rejected function leaves the state intact
  std::vector<Branch> branches(state.branches().begin(), state.branches().end());
  for (auto& b : branches) {
    BasisLabel before = b.label;
    f(b.label);
    if (b.label.width() != before.width()) {
      throw IntegrityError("branch function changed the label width");
    }
    before.xor_with(b.label);
    before.clear_masked(touched_mask);
    if (std::any_of(before.words().begin(), before.words().end(), [](auto w) { return w != 0; })) {
      throw IntegrityError("branch function modified bits outside its declared registers");
    }
  }
  std::sort(branches.begin(), branches.end(),
            [](const Branch& a, const Branch& b) { return a.label < b.label; });
  for (std::size_t i = 1; i < branches.size(); ++i) {
    if (branches[i].label == branches[i - 1].label) {
      throw IntegrityError(fmt::format("branch function is not injective: two branches map to label {}",
                                       branches[i].label.to_hex()));
    }
  }
  state.assign(std::move(branches));
  state.counter().branch_function += 1;
}

bool is_bijective_on(const BranchFunction& f, const RegisterLayout& layout,
                     std::span<const Register> touched) {
  std::size_t total = 0;
  for (const auto& r : touched) total += r.width;
  if (total > 20) throw std::invalid_argument("exhaustive bijectivity check limited to 20 bits");
  std::vector<BasisLabel> images;
  images.reserve(std::size_t{1} << total);
  for (std::uint64_t pattern = 0; pattern < (std::uint64_t{1} << total); ++pattern) {
    BasisLabel label(layout.width());
    std::uint64_t rest = pattern;
    for (const auto& r : touched) {
      label.set_field(r.offset, r.width, rest);
      rest >>= r.width;
    }
    f(label);
    images.push_back(std::move(label));
  }
  std::sort(images.begin(), images.end());
  return std::adjacent_find(images.begin(), images.end()) == images.end();
}

void apply_single_qubit_gate(SparseState& state, std::size_t qubit, const Matrix2& u,
                             std::span<const std::size_t> controls) {
  check_qubit(state, qubit);
  check_unitary(u);
  for (auto c : controls) {
    check_qubit(state, c);
    if (c == qubit) throw std::invalid_argument("control qubit coincides with gate target");
  }
  auto branches = state.take_branches();
  std::vector<Branch> out;
  out.reserve(branches.size() * 2);
  for (auto& b : branches) {
    if (!controls_set(b.label, controls)) {
      out.push_back(std::move(b));
      continue;
    }
    const int in = b.label.bit(qubit) ? 1 : 0;
    for (int o = 0; o < 2; ++o) {
      const Amplitude coeff = u[o][in];
      if (coeff == Amplitude{0.0}) continue;
      Branch nb{b.label, b.amplitude * coeff};
      nb.label.set_bit(qubit, o == 1);
      out.push_back(std::move(nb));
    }
  }
  state.assign(std::move(out));
  if (controls.empty()) {
    state.counter().single_qubit += 1;
  } else {
    state.counter().controlled += 1;
  }
}

void apply_controlled(SparseState& state, std::span<const std::size_t> controls,
                      std::span<const std::size_t> targets,
                      const std::function<void(SparseState&)>& op) {
  for (auto c : controls) {
    check_qubit(state, c);
    if (std::find(targets.begin(), targets.end(), c) != targets.end()) {
      throw std::invalid_argument(fmt::format("control qubit {} overlaps the target operation", c));
    }
  }
  auto branches = state.take_branches();
  std::vector<Branch> idle;
  std::vector<Branch> active;
  for (auto& b : branches) {
    (controls_set(b.label, controls) ? active : idle).push_back(std::move(b));
  }
  SparseState sub = SparseState::from_branches(state.layout(), active);
  const auto restore = [&] {
    idle.insert(idle.end(), active.begin(), active.end());
    state.assign(std::move(idle));
  };
  try {
    op(sub);
  } catch (...) {
    restore();
    throw;
  }
  if (!(sub.layout() == state.layout())) {
    restore();
    throw IntegrityError("controlled operation changed the register layout");
  }
  for (const auto& b : sub.branches()) {
    if (!controls_set(b.label, controls)) {
      restore();
      throw IntegrityError("controlled operation modified one of its control qubits");
    }
  }
  state.counter() += sub.counter();
  state.counter().controlled += 1;
  auto result = sub.take_branches();
  idle.insert(idle.end(), std::make_move_iterator(result.begin()), std::make_move_iterator(result.end()));
  state.assign(std::move(idle));
}

void reflection_about_zero(SparseState& state, const Register& reg) {
  if (reg.end() > state.layout().width()) {
    throw std::out_of_range(fmt::format("register '{}' not in layout", reg.name));
  }
  auto branches = state.take_branches();
  for (auto& b : branches) {
    bool nonzero = false;
    for (std::size_t done = 0; done < reg.width && !nonzero; done += 64) {
      const std::size_t w = std::min<std::size_t>(64, reg.width - done);
      nonzero = b.label.field(reg.offset + done, w) != 0;
    }
    if (nonzero) b.amplitude = -b.amplitude;
  }
  state.assign(std::move(branches));
  state.counter().reflection += 1;
}

void reflection_about_zero(SparseState& state, std::span<const std::size_t> qubits) {
  for (auto q : qubits) check_qubit(state, q);
  auto branches = state.take_branches();
  for (auto& b : branches) {
    const bool nonzero = std::any_of(qubits.begin(), qubits.end(), [&](std::size_t q) { return b.label.bit(q); });
    if (nonzero) b.amplitude = -b.amplitude;
  }
  state.assign(std::move(branches));
  state.counter().reflection += 1;
}

void apply_phase_oracle(SparseState& state, const std::function<bool(const BasisLabel&)>& marked,
                        Amplitude factor) {
  if (std::abs(std::abs(factor) - 1.0) > 1e-12) throw std::invalid_argument("phase factor must have modulus 1");
  auto branches = state.take_branches();
  for (auto& b : branches) {
    if (marked(b.label)) b.amplitude *= factor;
  }
  state.assign(std::move(branches));
  state.counter().phase_oracle += 1;
}

void scale(SparseState& state, Amplitude factor) {
  if (std::abs(std::abs(factor) - 1.0) > 1e-12) throw std::invalid_argument("global factor must have modulus 1");
  auto branches = state.take_branches();
  for (auto& b : branches) b.amplitude *= factor;
  state.assign(std::move(branches));
}

std::map<std::uint64_t, double> register_distribution(const SparseState& state, const Register& reg) {
  std::map<std::uint64_t, double> dist;
  for (const auto& b : state.branches()) dist[b.label.field(reg.offset, reg.width)] += std::norm(b.amplitude);
  return dist;
}

Measurement measure_register(const SparseState& state, const Register& reg, std::mt19937_64& rng) {
  if (reg.width > 64) throw std::invalid_argument("measured register wider than 64 bits");
  const auto dist = register_distribution(state, reg);
  double total = 0.0;
  for (const auto& [value, p] : dist) total += p;
  // 53 random mantissa bits; identical on every platform for a given seed
  const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53 * total;
  std::uint64_t outcome = dist.rbegin()->first;
  double acc = 0.0;
  for (const auto& [value, p] : dist) {
    acc += p;
    if (u < acc) {
      outcome = value;
      break;
    }
  }
  std::vector<Branch> kept;
  for (const auto& b : state.branches()) {
    if (b.label.field(reg.offset, reg.width) == outcome) kept.push_back(b);
  }
  Measurement m{outcome, dist.at(outcome) / total, SparseState::from_branches(state.layout(), std::move(kept))};
  m.state.normalize();
  m.state.counter() = state.counter();
  return m;
}

Amplitude inner_product(const SparseState& a, const SparseState& b) {
  if (!(a.layout() == b.layout())) throw std::invalid_argument("inner product of states with different layouts");
  Amplitude acc{};
  auto ia = a.branches().begin();
  auto ib = b.branches().begin();
  while (ia != a.branches().end() && ib != b.branches().end()) {
    if (ia->label < ib->label) {
      ++ia;
    } else if (ib->label < ia->label) {
      ++ib;
    } else {
      acc += std::conj(ia->amplitude) * ib->amplitude;
      ++ia;
      ++ib;
    }
  }
  return acc;
}

double fidelity(const SparseState& a, const SparseState& b) {
  return std::norm(inner_product(a, b));
}

}  // namespace qmg::sim
