#pragma once

#include <ostream>

#include "qmg/sim/sparse_state.hpp"

namespace qmg::sim {

/// CSV dump, one row per branch:
///   label,<register fields...>,re,im
/// `label` is hexadecimal; register fields are unsigned decimal (hex with a
/// 0x prefix for registers wider than 64 bits); amplitudes use 17
/// significant digits.
void write_state_csv(std::ostream& out, const SparseState& state);

}  // namespace qmg::sim
