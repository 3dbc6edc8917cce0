#include "qmg/sim/register_layout.hpp"

#include <algorithm>

#include <fmt/format.h>

namespace qmg::sim {

std::size_t Register::qubit(std::size_t j) const {
  if (j >= width) {
    throw std::out_of_range(fmt::format("qubit {} outside register '{}' of width {}", j, name, width));
  }
  return offset + j;
}

RegisterLayout::RegisterLayout(std::size_t capacity) : capacity_(capacity) {}

Register RegisterLayout::add(std::string name, std::size_t width) {
  if (width == 0) throw std::invalid_argument(fmt::format("register '{}' has zero width", name));
  if (contains(name)) throw std::invalid_argument(fmt::format("duplicate register name '{}'", name));
  if (width_ + width > capacity_) {
    throw CapacityError(fmt::format(
        "register '{}' ({} qubits) would grow the label to {} bits, beyond the capacity of {} bits",
        name, width, width_ + width, capacity_));
  }
  registers_.push_back(Register{std::move(name), width_, width});
  width_ += width;
  return registers_.back();
}

const Register& RegisterLayout::at(std::string_view name) const {
  auto it = std::find_if(registers_.begin(), registers_.end(),
                         [&](const Register& r) { return r.name == name; });
  if (it == registers_.end()) throw std::out_of_range(fmt::format("no register named '{}'", name));
  return *it;
}

bool RegisterLayout::contains(std::string_view name) const {
  return std::any_of(registers_.begin(), registers_.end(),
                     [&](const Register& r) { return r.name == name; });
}

bool RegisterLayout::is_prefix_of(const RegisterLayout& wider) const {
  if (registers_.size() > wider.registers_.size()) return false;
  return std::equal(registers_.begin(), registers_.end(), wider.registers_.begin());
}

BasisLabel RegisterLayout::mask(std::span<const Register> regs) const {
  BasisLabel m(width_);
  for (const auto& r : regs) {
    if (r.end() > width_) throw std::out_of_range(fmt::format("register '{}' not in layout", r.name));
    for (std::size_t j = 0; j < r.width; ++j) m.set_bit(r.offset + j, true);
  }
  return m;
}

}  // namespace qmg::sim
