#include "qmg/encoding/fixed_point.hpp"

#include <cmath>
#include <regex>

#include <fmt/format.h>

namespace qmg::fixed {

void FixedPointFormat::validate() const {
  if (!(1 <= frac_bits && frac_bits < total_bits && total_bits <= 16)) {
    throw std::invalid_argument(
        fmt::format("fixed-point format needs 1 <= fb < k <= 16, got k={} fb={}", total_bits, frac_bits));
  }
}

double FixedPointFormat::resolution() const noexcept { return std::ldexp(1.0, -frac_bits); }
double FixedPointFormat::min_value() const noexcept { return std::ldexp(static_cast<double>(min_raw()), -frac_bits); }
double FixedPointFormat::max_value() const noexcept { return std::ldexp(static_cast<double>(max_raw()), -frac_bits); }

std::string FixedPointFormat::to_string() const { return fmt::format("fixed{}.{}", total_bits, frac_bits); }

FixedPointFormat FixedPointFormat::parse(std::string_view text) {
  static const std::regex pattern(R"(fixed<?(\d+)>?\.<?(\d+)>?)");
  std::cmatch m;
  if (!std::regex_match(text.begin(), text.end(), m, pattern)) {
    throw std::invalid_argument(fmt::format("bad fixed-point format '{}', expected e.g. fixed8.6", text));
  }
  FixedPointFormat f;
  f.total_bits = std::stoi(m[1].str());
  f.frac_bits = std::stoi(m[2].str());
  f.validate();
  return f;
}

std::int64_t DataWord::raw() const noexcept {
  const std::int64_t v = bits;
  const std::int64_t sign = std::int64_t{1} << (format.total_bits - 1);
  return (v ^ sign) - sign;
}

double DataWord::value() const noexcept { return decode_fixed(*this); }

DataWord DataWord::from_raw(std::int64_t raw, const FixedPointFormat& fmt) {
  fmt.validate();
  if (raw < fmt.min_raw() || raw > fmt.max_raw()) {
    if (fmt.overflow == OverflowMode::kError) {
      throw OverflowError(fmt::format("value {} x 2^-{} outside {}", raw, fmt.frac_bits, fmt.to_string()));
    }
    raw = raw < fmt.min_raw() ? fmt.min_raw() : fmt.max_raw();
  }
  const auto mask = (std::uint64_t{1} << fmt.total_bits) - 1;
  return DataWord{static_cast<std::uint32_t>(static_cast<std::uint64_t>(raw) & mask), fmt};
}

double decode_fixed(const DataWord& w) noexcept {
  return std::ldexp(static_cast<double>(w.raw()), -w.format.frac_bits);
}

std::int64_t round_div_half_even(__int128 num, __int128 den) {
  if (den == 0) throw std::domain_error("division by zero in fixed-point kernel");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  __int128 q = num / den;
  __int128 r = num % den;
  if (r < 0) {  // floor division
    q -= 1;
    r += den;
  }
  const __int128 twice = 2 * r;
  if (twice > den || (twice == den && (q & 1) != 0)) q += 1;
  return static_cast<std::int64_t>(q);
}

DataWord from_rational_raw(__int128 num, __int128 den, const FixedPointFormat& fmt) {
  return DataWord::from_raw(round_div_half_even(num, den), fmt);
}

DataWord encode_fixed(double x, const FixedPointFormat& fmt) {
  fmt.validate();
  if (!std::isfinite(x)) throw std::invalid_argument("cannot encode a non-finite value");
  const double scaled = std::ldexp(x, fmt.frac_bits);
  if (std::abs(scaled) > 0x1.0p62) throw OverflowError(fmt::format("{} outside {}", x, fmt.to_string()));
  // nearbyint under the default rounding mode is round-half-to-even
  return DataWord::from_raw(static_cast<std::int64_t>(std::nearbyint(scaled)), fmt);
}

namespace {

void same_format(const DataWord& a, const DataWord& b) {
  if (!(a.format == b.format)) throw std::invalid_argument("fixed-point operands in different formats");
}

}  // namespace

DataWord fixed_add(const DataWord& a, const DataWord& b) {
  same_format(a, b);
  return DataWord::from_raw(a.raw() + b.raw(), a.format);
}

DataWord fixed_sub(const DataWord& a, const DataWord& b) {
  same_format(a, b);
  return DataWord::from_raw(a.raw() - b.raw(), a.format);
}

DataWord fixed_negate(const DataWord& a) { return DataWord::from_raw(-a.raw(), a.format); }

DataWord fixed_scale_pow2(const DataWord& a, int m) {
  if (m >= 0) {
    if (m > 40) throw OverflowError("scale exponent too large");
    return DataWord::from_raw(a.raw() * (std::int64_t{1} << m), a.format);
  }
  if (m < -60) return DataWord::from_raw(0, a.format);
  return from_rational_raw(a.raw(), __int128{1} << (-m), a.format);
}

}  // namespace qmg::fixed
