#pragma once

#include <compare>
#include <iosfwd>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace polystar {

using BigInt = mpz_class;

// Canonical exact rational; every operation leaves gcd(num, den) = 1, den > 0.
class Rational {
 public:
  Rational() = default;
  Rational(long value) : value_(value) {}
  Rational(const BigInt& value) : value_(value) {}
  Rational(const BigInt& num, const BigInt& den);
  explicit Rational(const mpq_class& value) : value_(value) {}

  // Accepts "7", "-3/4", "0.25", "1e-3", "-1.5E2".
  static Rational parse(std::string_view text);

  BigInt numerator() const { return value_.get_num(); }
  BigInt denominator() const { return value_.get_den(); }
  int sign() const { return sgn(value_); }
  bool is_zero() const { return sign() == 0; }
  bool is_integer() const { return value_.get_den() == 1; }
  double to_double() const { return value_.get_d(); }
  std::string to_string() const;

  const mpq_class& get() const { return value_; }

  Rational& operator+=(const Rational& rhs) { value_ += rhs.value_; return *this; }
  Rational& operator-=(const Rational& rhs) { value_ -= rhs.value_; return *this; }
  Rational& operator*=(const Rational& rhs) { value_ *= rhs.value_; return *this; }
  Rational& operator/=(const Rational& rhs);
  Rational operator-() const { return Rational(mpq_class(-value_)); }

  friend Rational operator+(Rational lhs, const Rational& rhs) { return lhs += rhs; }
  friend Rational operator-(Rational lhs, const Rational& rhs) { return lhs -= rhs; }
  friend Rational operator*(Rational lhs, const Rational& rhs) { return lhs *= rhs; }
  friend Rational operator/(Rational lhs, const Rational& rhs) { return lhs /= rhs; }

  friend bool operator==(const Rational& lhs, const Rational& rhs) {
    return lhs.value_ == rhs.value_;
  }
  friend std::strong_ordering operator<=>(const Rational& lhs, const Rational& rhs) {
    int c = cmp(lhs.value_, rhs.value_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

 private:
  mpq_class value_;
};

Rational abs(const Rational& x);
// 0^0 = 1; 0^negative raises a domain error.
Rational pow(const Rational& base, long exponent);
Rational inverse(const Rational& x);

std::ostream& operator<<(std::ostream& os, const Rational& x);

}  // namespace polystar
