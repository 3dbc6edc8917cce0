#include "qmg/sim/preparation_oracle.hpp"

#include <cmath>

#include <fmt/format.h>

#include "qmg/sim/operations.hpp"

namespace qmg::sim {

PreparationOracle PreparationOracle::capture(const SparseState& state, const Register& index,
                                             std::span<const Register> excluded) {
  if (index.width > 24) throw CapacityError("preparation oracle limited to 24 index qubits");
  const std::size_t n_points = std::size_t{1} << index.width;
  if (state.size() != n_points) {
    throw IntegrityError(fmt::format(
        "state is not digitally encoded: {} branches for {} index values (missing or split branches)",
        state.size(), n_points));
  }

  PreparationOracle u;
  u.index_ = index;
  u.width_ = state.layout().width();
  std::vector<Register> fixed(excluded.begin(), excluded.end());
  u.excluded_mask_ = state.layout().mask(fixed);
  fixed.push_back(index);
  // payload = every bit outside the index and the excluded scratch
  u.payload_mask_ = BasisLabel(u.width_);
  for (std::size_t q = 0; q < u.width_; ++q) u.payload_mask_.set_bit(q, true);
  u.payload_mask_.clear_masked(state.layout().mask(fixed));

  u.payload_.assign(n_points, BasisLabel(u.width_));
  std::vector<bool> seen(n_points, false);
  const double magnitude = 1.0 / std::sqrt(static_cast<double>(n_points));
  bool first = true;
  for (const auto& b : state.branches()) {
    const auto i = static_cast<std::size_t>(b.label.field(index.offset, index.width));
    if (seen[i]) throw IntegrityError(fmt::format("index {} carries more than one branch", i));
    seen[i] = true;
    if (std::abs(std::abs(b.amplitude) - magnitude) > 1e-12) {
      throw IntegrityError(fmt::format("branch {} has amplitude magnitude {} instead of the uniform {}", i,
                                       std::abs(b.amplitude), magnitude));
    }
    BasisLabel excluded_part = b.label;
    excluded_part.clear_masked(u.payload_mask_);
    excluded_part.set_field(index.offset, index.width, 0);
    if (first) {
      u.excluded_values_ = excluded_part;
      first = false;
    } else if (!(excluded_part == u.excluded_values_)) {
      throw IntegrityError("scratch registers differ between branches at oracle capture");
    }
    BasisLabel payload = b.label;
    payload.clear_masked(u.excluded_mask_);
    payload.set_field(index.offset, index.width, 0);
    u.payload_[i] = std::move(payload);
  }
  return u;
}

void PreparationOracle::apply(SparseState& state) const {
  // registers appended after capture are left alone
  if (state.layout().width() < width_) {
    throw std::invalid_argument("preparation oracle applied to a narrower layout than it was captured on");
  }
  auto branches = state.take_branches();
  for (auto& b : branches) {
    const auto i = static_cast<std::size_t>(b.label.field(index_.offset, index_.width));
    b.label.xor_prefix(payload_[i]);
  }
  state.assign(std::move(branches));
  state.counter().u_invocations += 1;
}

double PreparationOracle::reproduction_fidelity(const SparseState& state) const {
  RegisterLayout layout = state.layout();
  SparseState reference = prepare_uniform_index(layout, index_.name);
  if (reference.layout().at(index_.name) != index_) {
    throw std::invalid_argument("index register moved since capture");
  }
  auto branches = reference.take_branches();
  for (auto& b : branches) b.label.xor_prefix(excluded_values_);
  reference.assign(std::move(branches));
  apply(reference);
  return fidelity(reference, state);
}

}  // namespace qmg::sim
