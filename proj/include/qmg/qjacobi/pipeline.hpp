#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "qmg/encoding/fixed_point.hpp"
#include "qmg/sharing/sharing.hpp"
#include "qmg/sim/sparse_state.hpp"

namespace qmg::qjacobi {

using sim::BasisLabel;
using sim::Register;
using sim::SparseState;

/// Label capacity of pipeline layouts; retained garbage grows by a few
/// hundred qubits per sweep.
inline constexpr std::size_t kPipelineCapacity = 1 << 16;

using IndexPredicate = std::function<bool(std::uint64_t)>;
/// Word to XOR into a destination, computed from the rest of the label.
using WordFunction = std::function<std::uint64_t(const BasisLabel&)>;

/// Where a gather leaves its results.
struct Neighbors {
  Register left;
  Register right;
  Register wrap;  // wrapped words displaced by the boundary values
};

/// A digitally encoded state sum_i N^{-1/2} |i>|payload(i)> together with
/// the log of reversible steps applied to it.
///
/// Every step keeps exactly one branch per index value. Registers are only
/// ever appended; retired values stay behind as garbage.
class DigitalPipeline {
 public:
  DigitalPipeline(std::size_t n_qubits, fixed::FixedPointFormat format, std::size_t capacity = kPipelineCapacity);

  const SparseState& state() const noexcept { return state_; }
  const Register& index() const noexcept { return index_; }
  const fixed::FixedPointFormat& format() const noexcept { return format_; }
  std::size_t size() const noexcept { return std::size_t{1} << index_.width; }
  std::size_t steps() const noexcept { return tape_.size(); }

  /// Fresh zero register of `width` qubits (default: one data word).
  Register allocate(const std::string& name, std::size_t width = 0);

  /// dest ^= fn(label) on branches whose index satisfies `where` (all if
  /// empty). `fn` must not read `dest`.
  void xor_kernel(const Register& dest, const WordFunction& fn, const IndexPredicate& where = {});

  /// Swaps two equal-width registers on selected branches.
  void swap(const Register& a, const Register& b, const IndexPredicate& where = {});

  /// i -> i + delta (mod N) on the index register.
  void shift_index(std::int64_t delta);

  /// Runs the sharing protocol across index bit `pairing_bit`.
  sharing::ShareResult share(const Register& data, std::size_t pairing_bit, const Register& dest_low,
                             const Register& dest_high);

  /// Every branch i learns src(i - stride) and src(i + stride) (cyclically)
  /// in fresh left / right registers. At index 0 and N - stride the wrapped
  /// word is moved to a wrap register and replaced by the ghost word.
  Neighbors gather(const Register& src, std::size_t stride, const fixed::DataWord& ghost_left,
                   const fixed::DataWord& ghost_right, const std::string& name);

  /// Like gather, but into the given zero registers.
  void gather_into(const Register& src, std::size_t stride, const fixed::DataWord& ghost_left,
                   const fixed::DataWord& ghost_right, const Neighbors& out);

  /// Moves `reg` into a fresh garbage register on selected branches,
  /// leaving `reg` zero there. Returns the garbage register.
  Register retire(const Register& reg, const IndexPredicate& where = {});

  /// Words held by `reg`, indexed by grid index.
  std::vector<fixed::DataWord> decode(const Register& reg) const;

  /// max_i | |a_i| - N^{-1/2} | together with a branch-count check.
  double amplitude_deviation() const;

  /// Undoes logged steps until `steps() == mark`.
  void undo_to(std::size_t mark);

  const sim::GateCounter& counter() const noexcept { return state_.counter(); }

 private:
  struct Step {
    std::string name;
    std::function<void(SparseState&)> undo;
  };

  SparseState state_;
  fixed::FixedPointFormat format_;
  Register index_;
  Register ancilla_;
  Register phase_;
  std::vector<Step> tape_;
  std::size_t next_id_ = 0;
};

/// word(label) for a register holding a data word.
fixed::DataWord read_word(const BasisLabel& label, const Register& reg, const fixed::FixedPointFormat& format);

}  // namespace qmg::qjacobi
