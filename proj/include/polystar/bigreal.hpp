#pragma once

#include <compare>
#include <iosfwd>
#include <string>
#include <string_view>

#include <mpfr.h>

namespace polystar {

class Rational;

using Precision = mpfr_prec_t;
inline constexpr Precision kDefaultPrecision = 160;
inline constexpr Precision kMinPrecision = 100;

// Owning MPFR real. Binary operations produce the larger operand precision;
// compound assignment widens the target if the operand is more precise.
class BigReal {
 public:
  explicit BigReal(Precision prec = kDefaultPrecision);
  BigReal(long value, Precision prec);
  BigReal(const Rational& value, Precision prec);
  static BigReal from_double(double value, Precision prec);
  static BigReal parse(std::string_view text, Precision prec);

  BigReal(const BigReal& other);
  BigReal(BigReal&& other) noexcept;
  BigReal& operator=(const BigReal& other);
  BigReal& operator=(BigReal&& other) noexcept;
  ~BigReal();

  Precision precision() const { return mpfr_get_prec(value_); }
  int sign() const { return mpfr_sgn(value_); }
  bool is_zero() const { return mpfr_zero_p(value_) != 0; }
  bool is_finite() const { return mpfr_number_p(value_) != 0; }
  double to_double() const { return mpfr_get_d(value_, MPFR_RNDN); }
  // Binary exponent e with 0.5 <= |x|/2^e < 1; LONG_MIN for zero.
  long exponent() const;
  // Scientific notation with the given number of significant digits.
  std::string to_string(int digits = 12) const;

  mpfr_srcptr get() const { return value_; }
  mpfr_ptr get() { return value_; }

  BigReal& operator+=(const BigReal& rhs);
  BigReal& operator-=(const BigReal& rhs);
  BigReal& operator*=(const BigReal& rhs);
  BigReal& operator/=(const BigReal& rhs);
  BigReal& operator*=(long rhs);
  BigReal& operator/=(unsigned long rhs);
  BigReal operator-() const;

  friend BigReal operator+(const BigReal& lhs, const BigReal& rhs);
  friend BigReal operator-(const BigReal& lhs, const BigReal& rhs);
  friend BigReal operator*(const BigReal& lhs, const BigReal& rhs);
  friend BigReal operator/(const BigReal& lhs, const BigReal& rhs);

  friend bool operator==(const BigReal& lhs, const BigReal& rhs);
  friend std::partial_ordering operator<=>(const BigReal& lhs, const BigReal& rhs);

 private:
  void widen_to(Precision prec);
  mpfr_t value_;
};

BigReal abs(const BigReal& x);
BigReal sqrt(const BigReal& x);
BigReal log(const BigReal& x);
BigReal log1p(const BigReal& x);
BigReal exp(const BigReal& x);
BigReal pow(const BigReal& base, long exponent);
BigReal pi(Precision prec);
BigReal max(const BigReal& a, const BigReal& b);
// 2^e at the given precision.
BigReal power_of_two(long e, Precision prec);

std::ostream& operator<<(std::ostream& os, const BigReal& x);

}  // namespace polystar
