#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "qmg/sim/basis_label.hpp"

namespace qmg::sim {

/// Label width cap when no capacity is requested explicitly.
inline constexpr std::size_t kDefaultLabelCapacity = 64;

/// Thrown when a layout would exceed its configured label capacity.
class CapacityError : public std::length_error {
 public:
  using std::length_error::length_error;
};

/// A named, contiguous range of qubits.
struct Register {
  std::string name;
  std::size_t offset = 0;
  std::size_t width = 0;

  std::size_t qubit(std::size_t j) const;
  std::size_t end() const noexcept { return offset + width; }

  friend bool operator==(const Register&, const Register&) = default;
};

/// Ordered set of disjoint registers covering [0, width()).
///
/// Registers are only ever appended, so an existing Register keeps its offset
/// for the lifetime of the layout.
class RegisterLayout {
 public:
  explicit RegisterLayout(std::size_t capacity = kDefaultLabelCapacity);

  Register add(std::string name, std::size_t width);

  const Register& at(std::string_view name) const;
  bool contains(std::string_view name) const;

  std::size_t width() const noexcept { return width_; }
  std::size_t capacity() const noexcept { return capacity_; }
  std::span<const Register> registers() const noexcept { return registers_; }

  /// True when every register of *this appears unchanged at the start of `wider`.
  bool is_prefix_of(const RegisterLayout& wider) const;

  /// Label of the layout's width with every bit of `regs` set.
  BasisLabel mask(std::span<const Register> regs) const;

  friend bool operator==(const RegisterLayout& a, const RegisterLayout& b) {
    return a.width_ == b.width_ && a.registers_ == b.registers_;
  }

 private:
  std::size_t capacity_;
  std::size_t width_ = 0;
  std::vector<Register> registers_;
};

}  // namespace qmg::sim
