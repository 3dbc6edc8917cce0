#include "qmg/sim/sparse_state.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

namespace qmg::sim {

GateCounter& GateCounter::operator+=(const GateCounter& o) {
  single_qubit += o.single_qubit;
  controlled += o.controlled;
  reflection += o.reflection;
  phase_oracle += o.phase_oracle;
  branch_function += o.branch_function;
  u_invocations += o.u_invocations;
  qpe_u_invocations += o.qpe_u_invocations;
  share_bit_runs += o.share_bit_runs;
  return *this;
}

GateCounter operator-(GateCounter a, const GateCounter& b) {
  a.single_qubit -= b.single_qubit;
  a.controlled -= b.controlled;
  a.reflection -= b.reflection;
  a.phase_oracle -= b.phase_oracle;
  a.branch_function -= b.branch_function;
  a.u_invocations -= b.u_invocations;
  a.qpe_u_invocations -= b.qpe_u_invocations;
  a.share_bit_runs -= b.share_bit_runs;
  return a;
}

SparseState::SparseState(RegisterLayout layout) : layout_(std::move(layout)) {
  branches_.push_back(Branch{BasisLabel(layout_.width()), Amplitude{1.0, 0.0}});
}

SparseState SparseState::from_branches(RegisterLayout layout, std::vector<Branch> branches) {
  SparseState s(std::move(layout));
  for (const auto& b : branches) {
    if (b.label.width() != s.layout_.width()) {
      throw std::invalid_argument(fmt::format("branch label width {} does not match layout width {}",
                                              b.label.width(), s.layout_.width()));
    }
  }
  s.assign(std::move(branches));
  return s;
}

double SparseState::norm_squared() const {
  double total = 0.0;
  for (const auto& b : branches_) total += std::norm(b.amplitude);
  return total;
}

Amplitude SparseState::amplitude(const BasisLabel& label) const {
  auto it = std::lower_bound(branches_.begin(), branches_.end(), label,
                             [](const Branch& b, const BasisLabel& l) { return b.label < l; });
  if (it != branches_.end() && it->label == label) return it->amplitude;
  return {};
}

Register SparseState::append_register(std::string name, std::size_t width) {
  Register r = layout_.add(std::move(name), width);
  for (auto& b : branches_) b.label.resize(layout_.width());
  return r;
}

void SparseState::extend_layout(const RegisterLayout& wider) {
  if (!layout_.is_prefix_of(wider)) {
    throw std::invalid_argument("extend_layout: target layout does not extend the current one");
  }
  layout_ = wider;
  for (auto& b : branches_) b.label.resize(layout_.width());
}

void SparseState::assign(std::vector<Branch> branches) {
  std::sort(branches.begin(), branches.end(),
            [](const Branch& a, const Branch& b) { return a.label < b.label; });
  std::vector<Branch> merged;
  merged.reserve(branches.size());
  for (auto& b : branches) {
    if (!merged.empty() && merged.back().label == b.label) {
      merged.back().amplitude += b.amplitude;
    } else {
      merged.push_back(std::move(b));
    }
  }
  std::erase_if(merged, [](const Branch& b) { return std::abs(b.amplitude) < kPruneTolerance; });
  branches_ = std::move(merged);
}

void SparseState::normalize() {
  const double n2 = norm_squared();
  if (n2 <= 0.0) throw IntegrityError("cannot normalize an empty state");
  const double inv = 1.0 / std::sqrt(n2);
  for (auto& b : branches_) b.amplitude *= inv;
}

}  // namespace qmg::sim
