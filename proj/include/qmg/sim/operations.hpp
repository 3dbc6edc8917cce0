#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <span>
#include <string_view>

#include "qmg/sim/sparse_state.hpp"

namespace qmg::sim {

using Matrix2 = std::array<std::array<Amplitude, 2>, 2>;

namespace gates {
Matrix2 hadamard();
Matrix2 pauli_x();
Matrix2 pauli_z();
/// diag(1, e^{i theta})
Matrix2 phase(double theta);
Matrix2 adjoint(const Matrix2& m);
}  // namespace gates

/// Reversible classical map on basis labels.
using BranchFunction = std::function<void(BasisLabel&)>;

/// Sum_i N^{-1/2} |i>|0...0> over the register named `index_register`.
SparseState prepare_uniform_index(RegisterLayout layout, std::string_view index_register);

/// Rewrites every branch label with `f`; amplitudes are untouched.
///
/// `f` may only modify bits inside `touched`; anything else, or two branches
/// colliding on one label, raises IntegrityError.
void apply_branch_function(SparseState& state, const BranchFunction& f,
                           std::span<const Register> touched);

/// Exhaustive bijectivity check of `f` over all patterns of `touched`
/// (other bits zero). Intended for small widths in tests.
bool is_bijective_on(const BranchFunction& f, const RegisterLayout& layout,
                     std::span<const Register> touched);

void apply_single_qubit_gate(SparseState& state, std::size_t qubit, const Matrix2& u,
                             std::span<const std::size_t> controls = {});

/// Runs `op` on the branches whose `controls` are all 1. `op` must leave the
/// control qubits alone; `targets` lists the qubits it may touch and must be
/// disjoint from `controls`.
void apply_controlled(SparseState& state, std::span<const std::size_t> controls,
                      std::span<const std::size_t> targets,
                      const std::function<void(SparseState&)>& op);

/// 2|0><0| - I on `reg`: negates every branch whose `reg` field is nonzero.
void reflection_about_zero(SparseState& state, const Register& reg);
void reflection_about_zero(SparseState& state, std::span<const std::size_t> qubits);

/// Multiplies branches selected by `marked` by `factor`.
void apply_phase_oracle(SparseState& state, const std::function<bool(const BasisLabel&)>& marked,
                        Amplitude factor = Amplitude{-1.0, 0.0});

/// Global scalar, used for the sign of composite operators.
void scale(SparseState& state, Amplitude factor);

struct Measurement {
  std::uint64_t outcome = 0;
  double probability = 0.0;
  SparseState state;
};

/// Born-rule sample of `reg`; returns the renormalized post-measurement state.
Measurement measure_register(const SparseState& state, const Register& reg, std::mt19937_64& rng);

/// Marginal probability of every value of `reg`.
std::map<std::uint64_t, double> register_distribution(const SparseState& state, const Register& reg);

/// <a|b>
Amplitude inner_product(const SparseState& a, const SparseState& b);

/// |<a|b>|^2; layouts must be identical.
double fidelity(const SparseState& a, const SparseState& b);

}  // namespace qmg::sim
