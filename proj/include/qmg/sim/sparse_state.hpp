#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "qmg/sim/basis_label.hpp"
#include "qmg/sim/register_layout.hpp"

namespace qmg::sim {

using Amplitude = std::complex<double>;

/// Amplitudes with magnitude below this are dropped after every operation.
inline constexpr double kPruneTolerance = 1e-14;

/// Raised when a simulated protocol detects a broken contract in the state
/// it was handed (non-injective permutation, dirty ancilla, phase estimate
/// off its support, ...).
class IntegrityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Branch {
  BasisLabel label;
  Amplitude amplitude;
};

/// Tallies of simulated work. Every field only grows during a run.
struct GateCounter {
  std::uint64_t single_qubit = 0;
  std::uint64_t controlled = 0;
  std::uint64_t reflection = 0;
  std::uint64_t phase_oracle = 0;
  std::uint64_t branch_function = 0;
  /// Applications of a state-preparation operator U or U^-1.
  std::uint64_t u_invocations = 0;
  /// The subset of u_invocations spent inside forward phase estimation.
  std::uint64_t qpe_u_invocations = 0;
  /// Completed single-bit sharing protocol runs.
  std::uint64_t share_bit_runs = 0;

  GateCounter& operator+=(const GateCounter& o);
  friend GateCounter operator-(GateCounter a, const GateCounter& b);
  friend bool operator==(const GateCounter&, const GateCounter&) = default;
};

/// Superposition stored as a label-sorted list of (basis label, amplitude).
///
/// Branches are kept sorted by label so iteration order, and with it every
/// floating-point reduction, is reproducible run to run.
class SparseState {
 public:
  /// The all-zero basis state |0...0> over `layout`.
  explicit SparseState(RegisterLayout layout);

  /// Builds a state from arbitrary branches (merged, pruned, not normalized).
  static SparseState from_branches(RegisterLayout layout, std::vector<Branch> branches);

  const RegisterLayout& layout() const noexcept { return layout_; }
  std::span<const Branch> branches() const noexcept { return branches_; }
  std::size_t size() const noexcept { return branches_.size(); }

  double norm_squared() const;
  Amplitude amplitude(const BasisLabel& label) const;

  /// Appends a zero-initialized register; existing registers keep their offsets.
  Register append_register(std::string name, std::size_t width);

  /// Re-expresses the state over `wider`, which must extend the current layout.
  void extend_layout(const RegisterLayout& wider);

  /// Replaces the branches; sorts by label, merges duplicates, prunes.
  void assign(std::vector<Branch> branches);

  /// Releases the branch list (for operations that rebuild it).
  std::vector<Branch> take_branches() { return std::move(branches_); }

  void normalize();

  GateCounter& counter() noexcept { return counter_; }
  const GateCounter& counter() const noexcept { return counter_; }

 private:
  RegisterLayout layout_;
  std::vector<Branch> branches_;
  GateCounter counter_;
};

}  // namespace qmg::sim
