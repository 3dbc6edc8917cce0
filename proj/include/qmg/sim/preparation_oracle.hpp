#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "qmg/sim/sparse_state.hpp"

namespace qmg::sim {

/// State-preparation operator U for a digitally encoded state.
///
/// A digitally encoded state has exactly one branch per index value,
/// sum_i N^{-1/2} |i>|p(i)>. The oracle XORs the captured payload p(i) into
/// every payload register of branches with index i, so U maps
/// sum_i N^{-1/2} |i>|0> to the captured state and is its own inverse.
/// Registers listed as `excluded` are neither read nor written (scratch owned
/// by the caller); they must hold the same value on every branch at capture.
class PreparationOracle {
 public:
  static PreparationOracle capture(const SparseState& state, const Register& index,
                                   std::span<const Register> excluded);

  /// Applies U (= U^-1); charges one U invocation. The state may carry
  /// registers appended after capture; U does not touch them.
  void apply(SparseState& state) const;

  /// |<U(reference input)|state>|^2 where the reference input is the uniform
  /// index superposition with zero payload.
  double reproduction_fidelity(const SparseState& state) const;

  const Register& index() const noexcept { return index_; }
  std::size_t layout_width() const noexcept { return width_; }

 private:
  PreparationOracle() = default;

  Register index_;
  std::size_t width_ = 0;
  BasisLabel payload_mask_;
  BasisLabel excluded_values_;
  BasisLabel excluded_mask_;
  std::vector<BasisLabel> payload_;
};

}  // namespace qmg::sim
