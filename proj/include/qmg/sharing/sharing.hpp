#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qmg/sim/preparation_oracle.hpp"
#include "qmg/sim/sparse_state.hpp"

/// Data register sharing between the two branches of an index pairing.
///
/// Both branches of a pair (index bit `pairing_bit` = 0 and = 1) learn each
/// other's data bit through Grover rotations and 3-bit phase estimation on
/// the rotation -S_Psi S_xi, whose eigenphases e^{+-2 pi i phi} satisfy
/// sin^2(pi phi) = (alpha + beta) / 2 and are therefore exact multiples of 1/8.
/// Every pair of the superposition is processed at once.
namespace qmg::sharing {

using sim::Register;
using sim::SparseState;

/// Phase-register estimates further than this (in probability) from the
/// canonical support {0, 2, 4, 6} are integrity failures.
inline constexpr double kOffSupportTolerance = 1e-9;

struct SharingRegisters {
  Register index;
  std::size_t pairing_bit = 0;  // bit of `index`
  Register data;
  Register ancilla;  // 1 qubit
  Register phase;    // 3 qubits, value m estimates phi = m / 8
};

/// Phase register value m, phi = m / 8 (mod 1).
struct PhaseValue {
  unsigned m = 0;

  double fraction() const noexcept { return m / 8.0; }
  /// m for phi in [0, 1/2], 8 - m for phi in (1/2, 1): the sign-resolved record.
  unsigned magnitude() const noexcept { return m <= 4 ? m : 8 - m; }
  /// |phi| in [0, 1/2].
  double abs_fraction() const noexcept { return magnitude() / 8.0; }
};

/// One protocol run: shares bit `data_bit` of the data register into the
/// 3-qubit `copy` register. Captures U from the state at construction.
class SharingContext {
 public:
  /// Captures U for the current state and checks that it reproduces the
  /// state from the reference input within fidelity 1 - 1e-9.
  static SharingContext capture(const SparseState& state, const SharingRegisters& regs, std::size_t data_bit,
                                const Register& copy);

  const SharingRegisters& registers() const noexcept { return regs_; }
  const sim::PreparationOracle& preparation() const noexcept { return prepare_; }
  const Register& copy() const noexcept { return copy_; }
  std::size_t data_bit() const noexcept { return data_bit_; }

  std::size_t pairing_qubit() const { return regs_.index.qubit(regs_.pairing_bit); }
  std::size_t data_qubit() const { return regs_.data.qubit(data_bit_); }
  std::size_t ancilla_qubit() const { return regs_.ancilla.qubit(0); }

 private:
  SharingContext(SharingRegisters regs, std::size_t data_bit, Register copy, sim::PreparationOracle prepare)
      : regs_(std::move(regs)), data_bit_(data_bit), copy_(std::move(copy)), prepare_(std::move(prepare)) {}

  SharingRegisters regs_;
  std::size_t data_bit_;
  Register copy_;
  sim::PreparationOracle prepare_;
};

/// Ancilla := alpha|0> + (1 - alpha)|1> = |NOT alpha>. Rejects a dirty ancilla.
void apply_G(SparseState& state, const SharingContext& ctx);

/// Negates branches whose ancilla is |1>.
void oracle_S_xi(SparseState& state, const SharingContext& ctx);

/// S_Psi = G S_Phi G^-1 with S_Phi = U H (2|0><0| - I) H U^-1 on the pairing
/// qubit. Two U invocations.
void grover_diffusion(SparseState& state, const SharingContext& ctx);

/// The rotation -S_Psi S_xi.
void grover_iterate(SparseState& state, const SharingContext& ctx);

/// Quantum Fourier transform |x> -> 8^{-1/2} sum_y e^{2 pi i x y / 2^n} |y>
/// on `reg` (little-endian), built from H, controlled phases and swaps.
void apply_qft(SparseState& state, const Register& reg, bool inverse);

struct PhaseEstimateReport {
  double off_support_probability = 0.0;
};

/// Hadamards on the phase register, controlled rotations to the powers
/// 1, 2, 4 (seven controlled diffusions in total), inverse QFT.
PhaseEstimateReport phase_estimate_3bit(SparseState& state, const SharingContext& ctx);
void inverse_phase_estimate_3bit(SparseState& state, const SharingContext& ctx);

/// copy ^= |m| (m in {5,6,7} recorded as 8 - m), so both eigencomponents
/// carry the same record. Odd m with non-negligible weight is an integrity
/// failure.
void copy_phase_and_fix_sign(SparseState& state, const SharingContext& ctx);

/// Inverse phase estimation followed by G^-1; checks that ancilla and phase
/// registers are back to zero.
void uncompute(SparseState& state, const SharingContext& ctx);

/// beta = 2 sin^2(pi |phi|) - alpha.
int decode_neighbor_bit(int alpha, PhaseValue phi);

struct BitShareReport {
  std::uint64_t qpe_u_invocations = 0;
  std::uint64_t total_u_invocations = 0;
  double off_support_probability = 0.0;
};

/// G, phase estimation, phase copy and uncompute for one data bit. The copy
/// register must be zero.
BitShareReport share_bit(SparseState& state, const SharingContext& ctx);

/// Inverse of share_bit for the same context (the run is an involution).
void unshare_bit(SparseState& state, const SharingContext& ctx);

struct ShareResult {
  std::vector<SharingContext> runs;  // one per data bit, in order
  Register dest_low;                 // receives the partner word where the pairing bit is 0
  Register dest_high;                // ... where it is 1
  std::uint64_t qpe_u_invocations = 0;
  std::uint64_t total_u_invocations = 0;
  double max_off_support_probability = 0.0;
};

/// Shares every bit of `regs.data`, appending one 3-qubit phase copy per
/// bit (named `<copy_prefix>.phi<b>`), then writes each branch's decoded
/// partner word into `dest_low` or `dest_high` according to its pairing bit.
/// The receiving destination must be zero. The data register is untouched
/// and the phase copies stay in the state as garbage.
ShareResult share_data_registers(SparseState& state, const SharingRegisters& regs, const Register& dest_low,
                                 const Register& dest_high, const std::string& copy_prefix);

/// Undoes share_data_registers; the phase copies return to zero.
void unshare_data_registers(SparseState& state, const ShareResult& result);

}  // namespace qmg::sharing
