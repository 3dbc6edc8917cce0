#include "qmg/sim/amplify.hpp"

#include <cmath>

#include "qmg/sim/operations.hpp"
#include "qmg/sim/preparation_oracle.hpp"

namespace qmg::sim {

double region_probability(const SparseState& state, const Register& index, const IndexPredicate& region) {
  double p = 0.0;
  for (const auto& b : state.branches()) {
    if (region(b.label.field(index.offset, index.width))) p += std::norm(b.amplitude);
  }
  return p;
}

void amplitude_amplify_region(SparseState& state, const Register& index, const IndexPredicate& region,
                              std::size_t iterations) {
  if (index.width > 24) throw CapacityError("amplification limited to 24 index qubits");
  const std::uint64_t n_points = std::uint64_t{1} << index.width;
  std::uint64_t marked = 0;
  for (std::uint64_t i = 0; i < n_points; ++i) marked += region(i) ? 1 : 0;
  if (marked == 0 || marked == n_points) {
    throw std::invalid_argument("amplification region must be a nonempty strict subset of the index range");
  }

  const auto prepare = PreparationOracle::capture(state, index, {});
  const auto h = gates::hadamard();
  for (std::size_t t = 0; t < iterations; ++t) {
    apply_phase_oracle(state, [&](const BasisLabel& l) { return region(l.field(index.offset, index.width)); });
    prepare.apply(state);
    for (std::size_t j = 0; j < index.width; ++j) apply_single_qubit_gate(state, index.qubit(j), h);
    reflection_about_zero(state, index);
    for (std::size_t j = 0; j < index.width; ++j) apply_single_qubit_gate(state, index.qubit(j), h);
    prepare.apply(state);
  }
}

}  // namespace qmg::sim
