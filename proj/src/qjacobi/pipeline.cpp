#include "qmg/qjacobi/pipeline.hpp"

#include <bit>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "qmg/sim/operations.hpp"

namespace qmg::qjacobi {

namespace {

std::uint64_t field(const BasisLabel& l, const Register& r) { return l.field(r.offset, r.width); }

std::uint64_t low_bits(std::size_t width) { return width >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << width) - 1; }

}  // namespace

fixed::DataWord read_word(const BasisLabel& label, const Register& reg, const fixed::FixedPointFormat& format) {
  return fixed::DataWord{static_cast<std::uint32_t>(field(label, reg)), format};
}

DigitalPipeline::DigitalPipeline(std::size_t n_qubits, fixed::FixedPointFormat format, std::size_t capacity)
    : state_(sim::RegisterLayout(capacity)), format_(format) {
  format_.validate();
  if (n_qubits < 1 || n_qubits > 16) throw std::invalid_argument("pipeline index register must have 1..16 qubits");
  sim::RegisterLayout layout(capacity);
  index_ = layout.add("index", n_qubits);
  ancilla_ = layout.add("share.ancilla", 1);
  phase_ = layout.add("share.phase", 3);
  state_ = sim::prepare_uniform_index(layout, "index");
}

Register DigitalPipeline::allocate(const std::string& name, std::size_t width) {
  if (width == 0) width = static_cast<std::size_t>(format_.total_bits);
  std::string unique = name;
  while (state_.layout().contains(unique)) unique = fmt::format("{}.{}", name, next_id_++);
  return state_.append_register(unique, width);
}

void DigitalPipeline::xor_kernel(const Register& dest, const WordFunction& fn, const IndexPredicate& where) {
  if (dest.width > 64) throw std::invalid_argument("kernel destinations are limited to 64 qubits");
  const Register idx = index_;
  const std::uint64_t mask = low_bits(dest.width);
  const sim::BranchFunction f = [=](BasisLabel& l) {
    if (where && !where(field(l, idx))) return;
    const std::uint64_t w = fn(l) & mask;
    l.xor_field(dest.offset, dest.width, w);
    if ((fn(l) & mask) != w) throw sim::IntegrityError(fmt::format("kernel into '{}' reads its own output", dest.name));
  };
  const Register touched[] = {dest};
  sim::apply_branch_function(state_, f, touched);
  tape_.push_back({"xor " + dest.name, [f, dest](SparseState& s) {
                     const Register t[] = {dest};
                     sim::apply_branch_function(s, f, t);
                   }});
}

void DigitalPipeline::swap(const Register& a, const Register& b, const IndexPredicate& where) {
  if (a.width != b.width || a.width > 64) throw std::invalid_argument("swap needs equal widths up to 64 qubits");
  const Register idx = index_;
  const sim::BranchFunction f = [=](BasisLabel& l) {
    if (where && !where(field(l, idx))) return;
    const auto x = field(l, a);
    l.set_field(a.offset, a.width, field(l, b));
    l.set_field(b.offset, b.width, x);
  };
  const Register touched[] = {a, b};
  sim::apply_branch_function(state_, f, touched);
  tape_.push_back({"swap " + a.name + " " + b.name, [f, a, b](SparseState& s) {
                     const Register t[] = {a, b};
                     sim::apply_branch_function(s, f, t);
                   }});
}

void DigitalPipeline::shift_index(std::int64_t delta) {
  const Register idx = index_;
  const auto n = static_cast<std::int64_t>(size());
  const auto shift = [idx, n](std::int64_t d) {
    const auto r = ((d % n) + n) % n;
    return sim::BranchFunction([idx, n, r](BasisLabel& l) {
      l.set_field(idx.offset, idx.width, (field(l, idx) + static_cast<std::uint64_t>(r)) % static_cast<std::uint64_t>(n));
    });
  };
  const Register touched[] = {idx};
  sim::apply_branch_function(state_, shift(delta), touched);
  tape_.push_back({fmt::format("shift {}", delta), [idx, f = shift(-delta)](SparseState& s) {
                     const Register t[] = {idx};
                     sim::apply_branch_function(s, f, t);
                   }});
}

sharing::ShareResult DigitalPipeline::share(const Register& data, std::size_t pairing_bit, const Register& dest_low,
                                            const Register& dest_high) {
  const sharing::SharingRegisters regs{index_, pairing_bit, data, ancilla_, phase_};
  auto result = sharing::share_data_registers(state_, regs, dest_low, dest_high, fmt::format("sh{}", next_id_++));
  tape_.push_back({"share " + data.name, [result](SparseState& s) { sharing::unshare_data_registers(s, result); }});
  return result;
}

Neighbors DigitalPipeline::gather(const Register& src, std::size_t stride, const fixed::DataWord& ghost_left,
                                  const fixed::DataWord& ghost_right, const std::string& name) {
  Neighbors out{allocate(name + ".L", src.width), allocate(name + ".R", src.width),
                allocate(name + ".wrap", src.width)};
  gather_into(src, stride, ghost_left, ghost_right, out);
  return out;
}

void DigitalPipeline::gather_into(const Register& src, std::size_t stride, const fixed::DataWord& ghost_left,
                                  const fixed::DataWord& ghost_right, const Neighbors& out) {
  if (!std::has_single_bit(stride) || stride >= size()) {
    throw std::invalid_argument(fmt::format("stride {} must be a power of two below N = {}", stride, size()));
  }
  const auto pairing = static_cast<std::size_t>(std::countr_zero(stride));
  // pairing bit 0 branches learn i + stride, pairing bit 1 branches i - stride
  share(src, pairing, out.right, out.left);
  shift_index(static_cast<std::int64_t>(stride));
  share(src, pairing, out.right, out.left);
  shift_index(-static_cast<std::int64_t>(stride));

  const Register idx = index_;
  const std::uint64_t last = size() - stride;
  const std::uint64_t gl = ghost_left.bits;
  const std::uint64_t gr = ghost_right.bits;
  const auto fix = [=](bool forward) {
    return sim::BranchFunction([=](BasisLabel& l) {
      const auto i = field(l, idx);
      if (i != 0 && i != last) return;
      const Register& side = i == 0 ? out.left : out.right;
      const std::uint64_t g = i == 0 ? gl : gr;
      const auto s = field(l, side);
      const auto w = field(l, out.wrap);
      if (forward) {
        l.set_field(side.offset, side.width, w ^ g);
        l.set_field(out.wrap.offset, out.wrap.width, s);
      } else {
        l.set_field(side.offset, side.width, w);
        l.set_field(out.wrap.offset, out.wrap.width, s ^ g);
      }
    });
  };
  const Register touched[] = {out.left, out.right, out.wrap};
  sim::apply_branch_function(state_, fix(true), touched);
  tape_.push_back({"boundary " + src.name, [out, f = fix(false)](SparseState& s) {
                     const Register t[] = {out.left, out.right, out.wrap};
                     sim::apply_branch_function(s, f, t);
                   }});
}

Register DigitalPipeline::retire(const Register& reg, const IndexPredicate& where) {
  const Register g = allocate(reg.name + ".old", reg.width);
  swap(reg, g, where);
  return g;
}

std::vector<fixed::DataWord> DigitalPipeline::decode(const Register& reg) const {
  std::vector<fixed::DataWord> out(size(), fixed::DataWord{0, format_});
  std::vector<bool> seen(size(), false);
  for (const auto& b : state_.branches()) {
    const auto i = field(b.label, index_);
    if (seen[i]) throw sim::IntegrityError(fmt::format("index {} carries more than one branch", i));
    seen[i] = true;
    out[i] = read_word(b.label, reg, format_);
  }
  if (state_.size() != size()) throw sim::IntegrityError("pipeline state lost its one-branch-per-index form");
  return out;
}

double DigitalPipeline::amplitude_deviation() const {
  if (state_.size() != size()) return std::numeric_limits<double>::infinity();
  const double target = 1.0 / std::sqrt(static_cast<double>(size()));
  double worst = 0.0;
  for (const auto& b : state_.branches()) worst = std::max(worst, std::abs(std::abs(b.amplitude) - target));
  return worst;
}

void DigitalPipeline::undo_to(std::size_t mark) {
  while (tape_.size() > mark) {
    auto step = std::move(tape_.back());
    tape_.pop_back();
    step.undo(state_);
  }
}

}  // namespace qmg::qjacobi
