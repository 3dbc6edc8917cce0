#include "qmg/sim/basis_label.hpp"

#include <algorithm>
#include <stdexcept>

#include <fmt/format.h>

namespace qmg::sim {

namespace {

constexpr std::size_t kWordBits = 64;

std::size_t words_for(std::size_t width) { return (width + kWordBits - 1) / kWordBits; }

std::uint64_t low_mask(std::size_t width) {
  return width >= kWordBits ? ~std::uint64_t{0} : ((std::uint64_t{1} << width) - 1);
}

}  // namespace

BasisLabel::BasisLabel(std::size_t width) : width_(width), words_(words_for(width), 0) {}

void BasisLabel::check_range(std::size_t offset, std::size_t width) const {
  if (width > kWordBits) {
    throw std::invalid_argument(fmt::format("label field wider than 64 bits ({})", width));
  }
  if (offset + width > width_) {
    throw std::out_of_range(
        fmt::format("label field [{}, {}) exceeds label width {}", offset, offset + width, width_));
  }
}

bool BasisLabel::bit(std::size_t pos) const {
  check_range(pos, 1);
  return (words_[pos / kWordBits] >> (pos % kWordBits)) & 1U;
}

void BasisLabel::set_bit(std::size_t pos, bool value) {
  check_range(pos, 1);
  const std::uint64_t m = std::uint64_t{1} << (pos % kWordBits);
  if (value) {
    words_[pos / kWordBits] |= m;
  } else {
    words_[pos / kWordBits] &= ~m;
  }
}

void BasisLabel::flip_bit(std::size_t pos) {
  check_range(pos, 1);
  words_[pos / kWordBits] ^= std::uint64_t{1} << (pos % kWordBits);
}

std::uint64_t BasisLabel::field(std::size_t offset, std::size_t width) const {
  check_range(offset, width);
  if (width == 0) return 0;
  const std::size_t w = offset / kWordBits;
  const std::size_t shift = offset % kWordBits;
  std::uint64_t value = words_[w] >> shift;
  if (shift + width > kWordBits) value |= words_[w + 1] << (kWordBits - shift);
  return value & low_mask(width);
}

void BasisLabel::set_field(std::size_t offset, std::size_t width, std::uint64_t value) {
  xor_field(offset, width, field(offset, width) ^ (value & low_mask(width)));
}

void BasisLabel::xor_field(std::size_t offset, std::size_t width, std::uint64_t value) {
  check_range(offset, width);
  if (width == 0) return;
  value &= low_mask(width);
  const std::size_t w = offset / kWordBits;
  const std::size_t shift = offset % kWordBits;
  words_[w] ^= value << shift;
  if (shift + width > kWordBits) words_[w + 1] ^= value >> (kWordBits - shift);
}

void BasisLabel::xor_with(const BasisLabel& other) {
  if (other.width_ != width_) throw std::invalid_argument("xor of labels with different widths");
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] ^= other.words_[i];
}

void BasisLabel::xor_prefix(const BasisLabel& other) {
  if (other.width_ > width_) throw std::invalid_argument("xor prefix wider than the label");
  for (std::size_t i = 0; i < other.words_.size(); ++i) words_[i] ^= other.words_[i];
}

bool BasisLabel::disjoint_from(const BasisLabel& mask) const {
  if (mask.width_ != width_) throw std::invalid_argument("mask width mismatch");
  for (std::size_t i = 0; i < words_.size(); ++i) {
    if (words_[i] & mask.words_[i]) return false;
  }
  return true;
}

void BasisLabel::clear_masked(const BasisLabel& mask) {
  if (mask.width_ != width_) throw std::invalid_argument("mask width mismatch");
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= ~mask.words_[i];
}

void BasisLabel::resize(std::size_t width) {
  words_.resize(words_for(width), 0);
  if (width < width_ && width % kWordBits != 0 && !words_.empty()) {
    words_.back() &= low_mask(width % kWordBits);
  }
  width_ = width;
}

std::string BasisLabel::to_hex() const {
  const std::size_t digits = width_ == 0 ? 1 : (width_ + 3) / 4;
  std::string out;
  out.reserve(digits);
  for (std::size_t d = digits; d-- > 0;) {
    const std::size_t offset = d * 4;
    const std::size_t w = std::min<std::size_t>(4, width_ > offset ? width_ - offset : 0);
    const auto nibble = w == 0 ? 0U : static_cast<unsigned>(field(offset, w));
    out.push_back("0123456789abcdef"[nibble]);
  }
  return out;
}

std::strong_ordering operator<=>(const BasisLabel& a, const BasisLabel& b) {
  if (a.width_ != b.width_) return a.width_ <=> b.width_;
  for (std::size_t i = a.words_.size(); i-- > 0;) {
    if (a.words_[i] != b.words_[i]) return a.words_[i] <=> b.words_[i];
  }
  return std::strong_ordering::equal;
}

}  // namespace qmg::sim
