#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace qmg::fixed {

class OverflowError : public std::overflow_error {
 public:
  using std::overflow_error::overflow_error;
};

enum class OverflowMode { kError, kSaturate };

/// k-bit two's-complement fixed point with `frac_bits` fractional bits.
/// Representable range: [-2^{k-1-fb}, 2^{k-1-fb} - 2^{-fb}].
struct FixedPointFormat {
  int total_bits = 8;
  int frac_bits = 6;
  OverflowMode overflow = OverflowMode::kError;

  /// Throws std::invalid_argument unless 1 <= fb < k <= 16.
  void validate() const;

  std::int64_t min_raw() const noexcept { return -(std::int64_t{1} << (total_bits - 1)); }
  std::int64_t max_raw() const noexcept { return (std::int64_t{1} << (total_bits - 1)) - 1; }
  double resolution() const noexcept;
  double min_value() const noexcept;
  double max_value() const noexcept;

  /// "fixed<k>.<fb>", e.g. "fixed8.6".
  std::string to_string() const;
  /// Accepts "fixed8.6" and "fixed<8>.<6>".
  static FixedPointFormat parse(std::string_view text);

  friend bool operator==(const FixedPointFormat&, const FixedPointFormat&) = default;
};

/// A k-bit data register value. `bits` holds the two's-complement pattern in
/// the low k bits.
struct DataWord {
  std::uint32_t bits = 0;
  FixedPointFormat format;

  std::int64_t raw() const noexcept;  // sign-extended integer
  double value() const noexcept;

  static DataWord from_raw(std::int64_t raw, const FixedPointFormat& fmt);

  friend bool operator==(const DataWord& a, const DataWord& b) noexcept {
    return a.bits == b.bits && a.format == b.format;
  }
};

double decode_fixed(const DataWord& w) noexcept;

/// Nearest representable value, ties to even.
DataWord encode_fixed(double x, const FixedPointFormat& fmt);

DataWord fixed_add(const DataWord& a, const DataWord& b);
DataWord fixed_sub(const DataWord& a, const DataWord& b);
DataWord fixed_negate(const DataWord& a);
/// a * 2^m; negative m rounds half to even.
DataWord fixed_scale_pow2(const DataWord& a, int m);

/// round-half-to-even of num / den (den != 0).
std::int64_t round_div_half_even(__int128 num, __int128 den);

/// Word holding round(num / den) raw units, with the format's overflow policy.
DataWord from_rational_raw(__int128 num, __int128 den, const FixedPointFormat& fmt);

}  // namespace qmg::fixed
