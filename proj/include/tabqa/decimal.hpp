#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace tabqa {

/// Exact base-10 number. Values are held as a digit string plus a scale so
/// that truncation and equality never go through binary floating point.
/// Instances are always normalized: no leading zeros, no trailing fractional
/// zeros, and zero is never negative.
class Decimal {
 public:
  Decimal() = default;

  /// Accepts `[+-]?digits[.digits]` and, when `allow_exponent` is set, a JSON
  /// style exponent suffix. Leading `.5` and trailing `5.` forms are accepted.
  static std::optional<Decimal> try_parse(std::string_view text,
                                          bool allow_exponent = true);
  /// Throws Error(MalformedAnswer) on bad input.
  static Decimal parse(std::string_view text);
  static Decimal from_int(std::int64_t value);
  /// Uses the shortest round-tripping representation of `value`.
  /// Throws Error(NonFinite) for NaN and infinities.
  static Decimal from_double(double value);

  double to_double() const;
  /// Minimal form: `5`, `-0.25`, `35.2`.
  std::string to_string() const;

  /// Drops digits beyond `places` fractional digits, rounding toward zero.
  Decimal truncated(int places) const;

  bool is_negative() const noexcept { return negative_; }
  bool is_zero() const noexcept { return digits_ == "0"; }
  bool is_integer() const noexcept { return scale_ == 0; }
  int fraction_digits() const noexcept { return scale_; }

  friend bool operator==(const Decimal&, const Decimal&) = default;
  friend std::strong_ordering operator<=>(const Decimal& a, const Decimal& b);

 private:
  Decimal(bool negative, std::string digits, int scale);
  void normalize();

  bool negative_ = false;
  std::string digits_ = "0";
  int scale_ = 0;
};

}  // namespace tabqa
