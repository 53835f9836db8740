#include "zetamoments/height.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>

#include "zetamoments/error.hpp"

namespace zm {

namespace decimal {
namespace {

struct Parts {
  std::string integer;   // no leading zeros, "0" if empty
  std::string fraction;  // no trailing zeros
};

Parts split(std::string_view canon) {
  Parts p;
  const auto dot = canon.find('.');
  if (dot == std::string_view::npos) {
    p.integer = std::string(canon);
  } else {
    p.integer = std::string(canon.substr(0, dot));
    p.fraction = std::string(canon.substr(dot + 1));
  }
  return p;
}

std::string join(std::string integer, std::string fraction) {
  const auto nz = integer.find_first_not_of('0');
  integer = nz == std::string::npos ? "0" : integer.substr(nz);
  while (!fraction.empty() && fraction.back() == '0') fraction.pop_back();
  return fraction.empty() ? integer : integer + "." + fraction;
}

// Aligns both operands to a common number of fraction digits and returns the
// digit strings of equal length (integer digits padded on the left).
std::pair<std::string, std::string> align(const Parts& a, const Parts& b, std::size_t& frac_len) {
  frac_len = std::max(a.fraction.size(), b.fraction.size());
  std::string da = a.integer + a.fraction + std::string(frac_len - a.fraction.size(), '0');
  std::string db = b.integer + b.fraction + std::string(frac_len - b.fraction.size(), '0');
  const std::size_t n = std::max(da.size(), db.size());
  da.insert(0, n - da.size(), '0');
  db.insert(0, n - db.size(), '0');
  return {da, db};
}

std::string unsplit(const std::string& digits, std::size_t frac_len) {
  const std::string integer = digits.substr(0, digits.size() - frac_len);
  const std::string fraction = digits.substr(digits.size() - frac_len);
  return join(integer.empty() ? "0" : integer, fraction);
}

// Both strings equal length, a >= b.
std::string sub_digits(const std::string& a, const std::string& b) {
  std::string out(a.size(), '0');
  int borrow = 0;
  for (std::size_t i = a.size(); i-- > 0;) {
    int d = (a[i] - '0') - (b[i] - '0') - borrow;
    borrow = d < 0 ? 1 : 0;
    if (d < 0) d += 10;
    out[i] = static_cast<char>('0' + d);
  }
  return out;
}

std::string add_digits(const std::string& a, const std::string& b) {
  std::string out(a.size() + 1, '0');
  int carry = 0;
  for (std::size_t i = a.size(); i-- > 0;) {
    const int d = (a[i] - '0') + (b[i] - '0') + carry;
    carry = d / 10;
    out[i + 1] = static_cast<char>('0' + d % 10);
  }
  out[0] = static_cast<char>('0' + carry);
  return out;
}

}  // namespace

std::string canonical(std::string_view text) {
  std::size_t i = 0;
  while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  std::size_t end = text.size();
  while (end > i && std::isspace(static_cast<unsigned char>(text[end - 1]))) --end;
  text = text.substr(i, end - i);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  if (text.empty()) throw FormatError("empty decimal");

  std::string digits;
  long point = -1;
  std::size_t k = 0;
  for (; k < text.size(); ++k) {
    const char c = text[k];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      digits.push_back(c);
    } else if (c == '.' && point < 0) {
      point = static_cast<long>(digits.size());
    } else {
      break;
    }
  }
  if (digits.empty()) throw FormatError("malformed decimal '" + std::string(text) + "'");
  if (point < 0) point = static_cast<long>(digits.size());
  if (k < text.size()) {
    if (text[k] != 'e' && text[k] != 'E') {
      throw FormatError("malformed decimal '" + std::string(text) + "'");
    }
    const std::string exponent(text.substr(k + 1));
    char* stop = nullptr;
    const long e = std::strtol(exponent.c_str(), &stop, 10);
    if (exponent.empty() || *stop != '\0') {
      throw FormatError("malformed exponent in '" + std::string(text) + "'");
    }
    point += e;
  }
  if (point < 0) {
    digits.insert(0, static_cast<std::size_t>(-point), '0');
    point = 0;
  }
  if (point > static_cast<long>(digits.size())) {
    digits.append(static_cast<std::size_t>(point) - digits.size(), '0');
  }
  return join(digits.substr(0, static_cast<std::size_t>(point)),
              digits.substr(static_cast<std::size_t>(point)));
}

int compare(std::string_view a, std::string_view b) {
  const Parts pa = split(a);
  const Parts pb = split(b);
  std::size_t frac = 0;
  const auto [da, db] = align(pa, pb, frac);
  return da < db ? -1 : (da > db ? 1 : 0);
}

std::string subtract(std::string_view a, std::string_view b) {
  const Parts pa = split(a);
  const Parts pb = split(b);
  std::size_t frac = 0;
  const auto [da, db] = align(pa, pb, frac);
  if (da >= db) return unsplit(sub_digits(da, db), frac);
  return "-" + unsplit(sub_digits(db, da), frac);
}

std::string add(std::string_view a, std::string_view b) {
  const Parts pa = split(a);
  const Parts pb = split(b);
  std::size_t frac = 0;
  const auto [da, db] = align(pa, pb, frac);
  return unsplit(add_digits(da, db), frac);
}

long double to_long_double(std::string_view a) {
  const std::string s(a);
  return std::strtold(s.c_str(), nullptr);
}

}  // namespace decimal

namespace {

constexpr double kBaseQuantum = 1.0e6;

std::string format_offset(double offset, int digits) {
  char buf[64];
  // Fixed notation: offsets live in [0, 2^20), so at most 7 integer digits.
  const int integer_digits = offset >= 1.0 ? static_cast<int>(std::floor(std::log10(offset))) + 1 : 1;
  const int frac_digits = std::max(0, digits - integer_digits);
  std::snprintf(buf, sizeof buf, "%.*f", frac_digits, offset);
  return buf;
}

}  // namespace

HeightValue::HeightValue(std::string base, double offset) : base_(decimal::canonical(base)), offset_(offset) {
  if (!(offset >= 0.0 && offset < kOffsetLimit)) {
    throw DomainError("height offset outside [0, 2^20)");
  }
  base_value_ = decimal::to_long_double(base_);
}

HeightValue HeightValue::from_double(double t) {
  if (!(t >= 0.0) || !std::isfinite(t)) throw DomainError("height must be finite and nonnegative");
  if (t < kBaseQuantum) return HeightValue("0", t);
  const double base = std::floor(t / kBaseQuantum) * kBaseQuantum;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.0f", base);
  return HeightValue(buf, t - base);
}

HeightValue HeightValue::from_long_double(long double t) {
  if (!(t >= 0.0L) || !std::isfinite(t)) throw DomainError("height must be finite and nonnegative");
  if (t < static_cast<long double>(kBaseQuantum)) return HeightValue("0", static_cast<double>(t));
  const long double base = std::floor(t / kBaseQuantum) * kBaseQuantum;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.0Lf", base);
  return HeightValue(buf, static_cast<double>(t - base));
}

HeightValue HeightValue::parse(std::string_view text) {
  const std::string canon = decimal::canonical(text);
  const auto dot = canon.find('.');
  const std::string integer = canon.substr(0, dot);
  const std::string fraction = dot == std::string::npos ? "" : canon.substr(dot + 1);
  if (integer.size() <= 6) return HeightValue("0", std::strtod(canon.c_str(), nullptr));
  const std::string base = integer.substr(0, integer.size() - 6) + "000000";
  std::string local = integer.substr(integer.size() - 6);
  if (!fraction.empty()) local += "." + fraction;
  return HeightValue(base, std::strtod(local.c_str(), nullptr));
}

HeightValue HeightValue::rebased(const std::string& base) const {
  const std::string canon = decimal::canonical(base);
  if (canon == base_) return *this;
  const long double shift = decimal::to_long_double(decimal::subtract(base_, canon));
  return HeightValue(canon, static_cast<double>(shift + static_cast<long double>(offset_)));
}

HeightValue HeightValue::shifted(double delta) const {
  const double moved = offset_ + delta;
  if (moved >= 0.0 && moved < kOffsetLimit) {
    HeightValue out = *this;
    out.offset_ = moved;
    return out;
  }
  const double steps = std::floor(moved / kBaseQuantum);
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.0f", std::fabs(steps) * kBaseQuantum);
  const std::string new_base =
      steps >= 0 ? decimal::add(base_, buf) : decimal::subtract(base_, buf);
  if (!new_base.empty() && new_base.front() == '-') throw DomainError("height shifted below zero");
  return HeightValue(new_base, moved - steps * kBaseQuantum);
}

std::string HeightValue::to_string(int offset_digits) const {
  return decimal::add(base_, decimal::canonical(format_offset(offset_, offset_digits)));
}

long double operator-(const HeightValue& a, const HeightValue& b) {
  const long double doff = static_cast<long double>(a.offset_) - static_cast<long double>(b.offset_);
  if (a.base_ == b.base_) return doff;
  return decimal::to_long_double(decimal::subtract(a.base_, b.base_)) + doff;
}

bool operator==(const HeightValue& a, const HeightValue& b) { return (a - b) == 0.0L; }

std::partial_ordering operator<=>(const HeightValue& a, const HeightValue& b) {
  const long double d = a - b;
  if (d < 0) return std::partial_ordering::less;
  if (d > 0) return std::partial_ordering::greater;
  if (d == 0) return std::partial_ordering::equivalent;
  return std::partial_ordering::unordered;
}

}  // namespace zm
