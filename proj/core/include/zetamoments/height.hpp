#pragma once

#include <compare>
#include <string>
#include <string_view>

namespace zm {

/// A point t on the critical line stored as an exact decimal base plus a
/// binary offset, t = base + offset, with offset in [0, 2^20).
///
/// Ordinates that share a base subtract exactly up to double rounding of the
/// offsets, which keeps interval arithmetic near large heights local. The
/// decimal base survives file round trips without loss.
class HeightValue {
 public:
  static constexpr double kOffsetLimit = 1048576.0;  // 2^20

  HeightValue() = default;
  HeightValue(std::string base, double offset);

  /// Splits a double into a base that is a multiple of 10^6 and an offset.
  static HeightValue from_double(double t);
  static HeightValue from_long_double(long double t);
  /// Parses "1234.5", "1.30664344087953251142539323425414e22" and friends.
  static HeightValue parse(std::string_view decimal);

  const std::string& base() const noexcept { return base_; }
  double offset() const noexcept { return offset_; }
  long double base_value() const noexcept { return base_value_; }

  long double value() const noexcept { return base_value_ + static_cast<long double>(offset_); }
  double to_double() const noexcept { return static_cast<double>(value()); }

  /// Same height re-expressed against `base` (which must not exceed it by more
  /// than the offset range allows).
  HeightValue rebased(const std::string& base) const;
  HeightValue shifted(double delta) const;

  /// Exact decimal rendering of base + offset with `offset_digits` significant
  /// digits in the offset.
  std::string to_string(int offset_digits = 18) const;

  friend long double operator-(const HeightValue& a, const HeightValue& b);
  friend bool operator==(const HeightValue& a, const HeightValue& b);
  friend std::partial_ordering operator<=>(const HeightValue& a, const HeightValue& b);

 private:
  std::string base_ = "0";
  double offset_ = 0.0;
  long double base_value_ = 0.0L;
};

namespace decimal {

/// Canonical form of a nonnegative decimal: no exponent, no leading zeros in
/// the integer part, no trailing zeros in the fraction.
std::string canonical(std::string_view text);
/// a - b for canonical decimals, as a canonical decimal with a leading '-' if negative.
std::string subtract(std::string_view a, std::string_view b);
std::string add(std::string_view a, std::string_view b);
int compare(std::string_view a, std::string_view b);
long double to_long_double(std::string_view a);

}  // namespace decimal

}  // namespace zm
