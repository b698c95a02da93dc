#include "tabqa/decimal.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>

#include "tabqa/error.hpp"

namespace tabqa {

namespace {

constexpr int kMaxExponent = 400;

bool is_digit(char c) { return c >= '0' && c <= '9'; }

// Compares two non-negative digit strings at equal scale.
std::strong_ordering compare_magnitude(const std::string& a, int scale_a,
                                       const std::string& b, int scale_b) {
  std::string x = a, y = b;
  if (scale_a < scale_b) x.append(scale_b - scale_a, '0');
  if (scale_b < scale_a) y.append(scale_a - scale_b, '0');
  if (x.size() != y.size()) return x.size() <=> y.size();
  int c = x.compare(y);
  return c <=> 0;
}

}  // namespace

Decimal::Decimal(bool negative, std::string digits, int scale)
    : negative_(negative), digits_(std::move(digits)), scale_(scale) {
  normalize();
}

void Decimal::normalize() {
  while (scale_ > 0 && digits_.size() > 1 && digits_.back() == '0') {
    digits_.pop_back();
    --scale_;
  }
  if (scale_ > 0 && digits_ == "0") scale_ = 0;
  std::size_t lead = 0;
  while (lead + 1 < digits_.size() && digits_[lead] == '0') ++lead;
  digits_.erase(0, lead);
  if (digits_.empty()) digits_ = "0";
  if (digits_ == "0") {
    negative_ = false;
    scale_ = 0;
  }
}

std::optional<Decimal> Decimal::try_parse(std::string_view text,
                                          bool allow_exponent) {
  std::size_t i = 0;
  bool negative = false;
  if (i < text.size() && (text[i] == '+' || text[i] == '-')) {
    negative = text[i] == '-';
    ++i;
  }
  std::string digits;
  int scale = 0;
  bool any_digit = false;
  while (i < text.size() && is_digit(text[i])) {
    digits.push_back(text[i++]);
    any_digit = true;
  }
  if (i < text.size() && text[i] == '.') {
    ++i;
    while (i < text.size() && is_digit(text[i])) {
      digits.push_back(text[i++]);
      ++scale;
      any_digit = true;
    }
  }
  if (!any_digit) return std::nullopt;
  if (i < text.size() && (text[i] == 'e' || text[i] == 'E')) {
    if (!allow_exponent) return std::nullopt;
    ++i;
    int exponent = 0;
    auto [ptr, ec] = std::from_chars(text.data() + i + (i < text.size() && text[i] == '+'),
                                     text.data() + text.size(), exponent);
    if (ec != std::errc() || ptr != text.data() + text.size()) return std::nullopt;
    if (exponent > kMaxExponent || exponent < -kMaxExponent) return std::nullopt;
    i = text.size();
    if (exponent >= 0) {
      int shift = std::min(exponent, scale);
      scale -= shift;
      digits.append(exponent - shift, '0');
    } else {
      scale += -exponent;
    }
  }
  if (i != text.size()) return std::nullopt;
  return Decimal(negative, std::move(digits), scale);
}

Decimal Decimal::parse(std::string_view text) {
  auto value = try_parse(text);
  if (!value) {
    throw Error(ErrorKind::MalformedAnswer,
                "not a decimal number: '" + std::string(text) + "'");
  }
  return *value;
}

Decimal Decimal::from_int(std::int64_t value) {
  return parse(std::to_string(value));
}

Decimal Decimal::from_double(double value) {
  if (!std::isfinite(value)) {
    throw Error(ErrorKind::NonFinite, "cannot represent non-finite value");
  }
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return parse(std::string_view(buf, ptr - buf));
}

double Decimal::to_double() const { return std::strtod(to_string().c_str(), nullptr); }

std::string Decimal::to_string() const {
  std::string out = negative_ ? "-" : "";
  if (scale_ == 0) return out + digits_;
  std::string padded = digits_;
  if (padded.size() <= static_cast<std::size_t>(scale_)) {
    padded.insert(0, scale_ - padded.size() + 1, '0');
  }
  padded.insert(padded.size() - scale_, ".");
  return out + padded;
}

Decimal Decimal::truncated(int places) const {
  if (places < 0) places = 0;
  if (scale_ <= places) return *this;
  std::string digits = digits_;
  std::size_t drop = static_cast<std::size_t>(scale_ - places);
  if (drop >= digits.size()) return Decimal();
  digits.erase(digits.size() - drop);
  return Decimal(negative_, std::move(digits), places);
}

std::strong_ordering operator<=>(const Decimal& a, const Decimal& b) {
  if (a.negative_ != b.negative_) {
    return a.negative_ ? std::strong_ordering::less : std::strong_ordering::greater;
  }
  auto magnitude = compare_magnitude(a.digits_, a.scale_, b.digits_, b.scale_);
  if (a.negative_) return 0 <=> magnitude;
  return magnitude;
}

}  // namespace tabqa
