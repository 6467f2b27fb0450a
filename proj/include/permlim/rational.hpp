#pragma once

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

#include "permlim/errors.hpp"

namespace permlim {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline BigInt numerator_of(const Rational& r) { return boost::multiprecision::numerator(r); }
inline BigInt denominator_of(const Rational& r) { return boost::multiprecision::denominator(r); }

inline double to_double(const Rational& r) { return r.convert_to<double>(); }
inline double to_double(double d) { return d; }

// "p/q" in lowest terms, or "p" when q == 1.
inline std::string to_string(const Rational& r) {
  const BigInt den = denominator_of(r);
  if (den == 1) return numerator_of(r).str();
  return numerator_of(r).str() + "/" + den.str();
}

inline BigInt binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  BigInt result = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    result *= n - k + i;
    result /= i;
  }
  return result;
}

inline BigInt factorial(std::uint64_t n) {
  BigInt result = 1;
  for (std::uint64_t i = 2; i <= n; ++i) result *= i;
  return result;
}

namespace detail {

// Boost reads a leading 0 as an octal prefix, so strip leading zeros first.
inline BigInt decimal_digits(std::string_view digits) {
  const auto first = digits.find_first_not_of('0');
  if (first == std::string_view::npos) return BigInt(0);
  return BigInt(std::string(digits.substr(first)));
}

inline BigInt parse_bigint(std::string_view text, std::string_view whole) {
  if (text.empty()) throw InputError("empty number in '" + std::string(whole) + "'");
  std::size_t start = (text.front() == '-' || text.front() == '+') ? 1 : 0;
  if (start == text.size()) throw InputError("bad number '" + std::string(whole) + "'");
  for (std::size_t i = start; i < text.size(); ++i) {
    if (text[i] < '0' || text[i] > '9') throw InputError("bad number '" + std::string(whole) + "'");
  }
  BigInt value = decimal_digits(text.substr(start));
  return text.front() == '-' ? BigInt(-value) : value;
}

// Exact value of a plain decimal literal such as "-0.125" or "3e-2".
inline Rational parse_decimal(std::string_view text) {
  std::string_view mantissa = text;
  long long exponent = 0;
  if (auto e = text.find_first_of("eE"); e != std::string_view::npos) {
    mantissa = text.substr(0, e);
    std::string_view exp_text = text.substr(e + 1);
    if (!exp_text.empty() && exp_text.front() == '+') exp_text.remove_prefix(1);
    auto [ptr, ec] = std::from_chars(exp_text.data(), exp_text.data() + exp_text.size(), exponent);
    if (ec != std::errc{} || ptr != exp_text.data() + exp_text.size() || exp_text.empty()) {
      throw InputError("bad exponent in '" + std::string(text) + "'");
    }
  }
  std::string digits;
  bool negative = false;
  std::size_t i = 0;
  if (!mantissa.empty() && (mantissa[0] == '-' || mantissa[0] == '+')) {
    negative = mantissa[0] == '-';
    i = 1;
  }
  bool seen_point = false;
  bool seen_digit = false;
  for (; i < mantissa.size(); ++i) {
    char c = mantissa[i];
    if (c == '.' && !seen_point) {
      seen_point = true;
    } else if (c >= '0' && c <= '9') {
      digits.push_back(c);
      seen_digit = true;
      if (seen_point) --exponent;
    } else {
      throw InputError("bad number '" + std::string(text) + "'");
    }
  }
  if (!seen_digit) throw InputError("bad number '" + std::string(text) + "'");
  Rational value{decimal_digits(digits)};
  BigInt scale = boost::multiprecision::pow(BigInt(10), static_cast<unsigned>(std::llabs(exponent)));
  value = exponent >= 0 ? Rational(value * scale) : Rational(value / scale);
  return negative ? Rational(-value) : value;
}

}  // namespace detail

// Parses "p/q", an integer, or a decimal literal exactly.
inline Rational parse_rational(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  if (text.empty()) throw InputError("empty rational");
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    BigInt num = detail::parse_bigint(text.substr(0, slash), text);
    BigInt den = detail::parse_bigint(text.substr(slash + 1), text);
    if (den == 0) throw InputError("zero denominator in '" + std::string(text) + "'");
    return Rational(num, den);
  }
  return detail::parse_decimal(text);
}

// Exact rational for the shortest decimal that round-trips `value`, so 0.8 maps to 4/5.
inline Rational rational_from_double(double value) {
  if (!std::isfinite(value)) throw InputError("non-finite number");
  std::array<char, 64> buffer{};
  auto [ptr, ec] = std::to_chars(buffer.data(), buffer.data() + buffer.size(), value);
  if (ec != std::errc{}) throw InputError("cannot format number");
  return detail::parse_decimal(std::string_view(buffer.data(), static_cast<std::size_t>(ptr - buffer.data())));
}

}  // namespace permlim
