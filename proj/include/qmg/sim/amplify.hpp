#pragma once

#include <cstdint>
#include <functional>

#include "qmg/sim/sparse_state.hpp"

namespace qmg::sim {

using IndexPredicate = std::function<bool(std::uint64_t)>;

/// Total probability of branches whose index satisfies `region`.
double region_probability(const SparseState& state, const Register& index, const IndexPredicate& region);

/// Grover amplitude amplification of an index region of a uniformly
/// encoded state: phase oracle on the region followed by the reflection
/// U H (2|0><0| - I) H U^-1 about the encoded state, `iterations` times.
/// After t iterations the region holds probability sin^2((2t+1) theta) with
/// sin^2 theta the marked fraction.
void amplitude_amplify_region(SparseState& state, const Register& index, const IndexPredicate& region,
                              std::size_t iterations);

}  // namespace qmg::sim
