#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <charconv>
#include <cmath>
#include <string>
#include <string_view>

namespace cliffmul {

using BigInt = boost::multiprecision::cpp_int;

/// Exact rational coefficient; kept in lowest terms with positive
/// denominator by the backend.
using Rational = boost::multiprecision::cpp_rational;

inline bool coeff_is_zero(const Rational& c) { return c == 0; }
inline bool coeff_is_zero(double c) { return c == 0.0; }

inline bool coeff_is_negative(const Rational& c) { return c < 0; }
inline bool coeff_is_negative(double c) { return c < 0.0; }

inline bool coeff_is_one(const Rational& c) { return c == 1; }
inline bool coeff_is_one(double c) { return c == 1.0; }

inline Rational coeff_neg(const Rational& c) { return -c; }
inline double coeff_neg(double c) { return -c; }

inline std::string coeff_to_text(const Rational& c) {
  std::string s = numerator(c).str();
  if (denominator(c) != 1) {
    s += '/';
    s += denominator(c).str();
  }
  return s;
}

/// Shortest decimal form that round-trips to the same bits.
inline std::string coeff_to_text(double c) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, c);
  return std::string(buf, res.ptr);
}

/// A lexed unsigned numeric literal. `text` is the full token,
/// `int_digits`/`frac_digits` its parts, `exp10` the decimal exponent.
struct NumberLit {
  std::string_view text;
  std::string_view int_digits;
  std::string_view frac_digits;  // empty when no '.'
  long exp10 = 0;
  bool plain_integer = true;  // no '.' and no exponent
};

template <class C>
struct coeff_ops;

template <>
struct coeff_ops<Rational> {
  static Rational from_literal(const NumberLit& lit) {
    std::string mantissa(lit.int_digits);
    mantissa += lit.frac_digits;
    Rational value{BigInt(mantissa)};
    long scale = lit.exp10 - static_cast<long>(lit.frac_digits.size());
    if (scale > 0)
      value *= BigInt(pow(BigInt(10), static_cast<unsigned>(scale)));
    else if (scale < 0)
      value /= BigInt(pow(BigInt(10), static_cast<unsigned>(-scale)));
    return value;
  }

  static Rational from_fraction(const NumberLit& num, const NumberLit& den) {
    BigInt d{std::string(den.int_digits)};
    if (d == 0) throw std::domain_error("zero denominator");
    return Rational(BigInt(std::string(num.int_digits))) / d;
  }
};

template <>
struct coeff_ops<double> {
  static double from_literal(const NumberLit& lit) {
    double value = 0.0;
    auto res = std::from_chars(lit.text.data(),
                               lit.text.data() + lit.text.size(), value);
    if (res.ec != std::errc{} || !std::isfinite(value))
      throw std::domain_error("coefficient is not a finite number");
    return value;
  }

  static double from_fraction(const NumberLit& num, const NumberLit& den) {
    const double n = from_literal(num);
    const double d = from_literal(den);
    if (d == 0.0) throw std::domain_error("zero denominator");
    const double value = n / d;
    if (!std::isfinite(value))
      throw std::domain_error("coefficient is not a finite number");
    return value;
  }
};

}  // namespace cliffmul
