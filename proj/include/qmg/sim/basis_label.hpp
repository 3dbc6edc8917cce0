#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace qmg::sim {

/// Bit string naming one computational-basis branch of a SparseState.
///
/// Bit 0 is the lowest qubit of the register layout. A register field of
/// width w at offset o reads bits [o, o + w) with bit o as the least
/// significant bit of the field value.
class BasisLabel {
 public:
  BasisLabel() = default;
  explicit BasisLabel(std::size_t width);

  std::size_t width() const noexcept { return width_; }

  bool bit(std::size_t pos) const;
  void set_bit(std::size_t pos, bool value);
  void flip_bit(std::size_t pos);

  /// Reads a field of at most 64 bits.
  std::uint64_t field(std::size_t offset, std::size_t width) const;
  void set_field(std::size_t offset, std::size_t width, std::uint64_t value);
  void xor_field(std::size_t offset, std::size_t width, std::uint64_t value);

  void xor_with(const BasisLabel& other);
  /// XOR with a label no wider than this one, aligned at bit 0.
  void xor_prefix(const BasisLabel& other);
  /// True when (*this & mask) is all zero.
  bool disjoint_from(const BasisLabel& mask) const;
  void clear_masked(const BasisLabel& mask);

  /// Grows (with zero bits) or shrinks the label.
  void resize(std::size_t width);

  std::span<const std::uint64_t> words() const noexcept { return words_; }

  /// Hexadecimal, most significant digit first, ceil(width/4) digits.
  std::string to_hex() const;

  friend bool operator==(const BasisLabel&, const BasisLabel&) = default;
  /// Numeric order of the bit strings (labels of equal width).
  friend std::strong_ordering operator<=>(const BasisLabel& a, const BasisLabel& b);

 private:
  void check_range(std::size_t offset, std::size_t width) const;

  std::size_t width_ = 0;
  std::vector<std::uint64_t> words_;
};

}  // namespace qmg::sim
