#include "polystar/bigreal.hpp"

#include <algorithm>
#include <climits>
#include <ostream>
#include <string>
#include <vector>

#include "polystar/errors.hpp"
#include "polystar/rational.hpp"

namespace polystar {

BigReal::BigReal(Precision prec) {
  mpfr_init2(value_, prec);
  mpfr_set_zero(value_, 1);
}

BigReal::BigReal(long value, Precision prec) {
  mpfr_init2(value_, prec);
  mpfr_set_si(value_, value, MPFR_RNDN);
}

BigReal::BigReal(const Rational& value, Precision prec) {
  mpfr_init2(value_, prec);
  mpfr_set_q(value_, value.get().get_mpq_t(), MPFR_RNDN);
}

BigReal BigReal::from_double(double value, Precision prec) {
  BigReal r(prec);
  mpfr_set_d(r.value_, value, MPFR_RNDN);
  return r;
}

BigReal BigReal::parse(std::string_view text, Precision prec) {
  BigReal r(prec);
  std::string s(text);
  char* end = nullptr;
  mpfr_strtofr(r.value_, s.c_str(), &end, 10, MPFR_RNDN);
  if (end == s.c_str() || *end != '\0') {
    throw Error(ErrorCode::Schema, "not a real number: '" + s + "'");
  }
  return r;
}

BigReal::BigReal(const BigReal& other) {
  mpfr_init2(value_, other.precision());
  mpfr_set(value_, other.value_, MPFR_RNDN);
}

BigReal::BigReal(BigReal&& other) noexcept {
  mpfr_init2(value_, MPFR_PREC_MIN);
  mpfr_swap(value_, other.value_);
}

BigReal& BigReal::operator=(const BigReal& other) {
  if (this != &other) {
    if (precision() != other.precision()) mpfr_set_prec(value_, other.precision());
    mpfr_set(value_, other.value_, MPFR_RNDN);
  }
  return *this;
}

BigReal& BigReal::operator=(BigReal&& other) noexcept {
  mpfr_swap(value_, other.value_);
  return *this;
}

BigReal::~BigReal() { mpfr_clear(value_); }

long BigReal::exponent() const {
  if (!mpfr_regular_p(value_)) return is_zero() ? LONG_MIN : LONG_MAX;
  return mpfr_get_exp(value_);
}

std::string BigReal::to_string(int digits) const {
  if (mpfr_nan_p(value_)) return "nan";
  if (mpfr_inf_p(value_)) return sign() < 0 ? "-inf" : "inf";
  std::vector<char> buf(static_cast<size_t>(digits) + 64);
  mpfr_snprintf(buf.data(), buf.size(), "%.*Rg", digits, value_);
  return std::string(buf.data());
}

void BigReal::widen_to(Precision prec) {
  if (prec > precision()) mpfr_prec_round(value_, prec, MPFR_RNDN);
}

BigReal& BigReal::operator+=(const BigReal& rhs) {
  widen_to(rhs.precision());
  mpfr_add(value_, value_, rhs.value_, MPFR_RNDN);
  return *this;
}

BigReal& BigReal::operator-=(const BigReal& rhs) {
  widen_to(rhs.precision());
  mpfr_sub(value_, value_, rhs.value_, MPFR_RNDN);
  return *this;
}

BigReal& BigReal::operator*=(const BigReal& rhs) {
  widen_to(rhs.precision());
  mpfr_mul(value_, value_, rhs.value_, MPFR_RNDN);
  return *this;
}

BigReal& BigReal::operator/=(const BigReal& rhs) {
  widen_to(rhs.precision());
  mpfr_div(value_, value_, rhs.value_, MPFR_RNDN);
  return *this;
}

BigReal& BigReal::operator*=(long rhs) {
  mpfr_mul_si(value_, value_, rhs, MPFR_RNDN);
  return *this;
}

BigReal& BigReal::operator/=(unsigned long rhs) {
  mpfr_div_ui(value_, value_, rhs, MPFR_RNDN);
  return *this;
}

BigReal BigReal::operator-() const {
  BigReal r(precision());
  mpfr_neg(r.value_, value_, MPFR_RNDN);
  return r;
}

namespace {

template <class Op>
BigReal binary(const BigReal& lhs, const BigReal& rhs, Op op) {
  BigReal r(std::max(lhs.precision(), rhs.precision()));
  op(r.get(), lhs.get(), rhs.get(), MPFR_RNDN);
  return r;
}

}  // namespace

BigReal operator+(const BigReal& lhs, const BigReal& rhs) { return binary(lhs, rhs, mpfr_add); }
BigReal operator-(const BigReal& lhs, const BigReal& rhs) { return binary(lhs, rhs, mpfr_sub); }
BigReal operator*(const BigReal& lhs, const BigReal& rhs) { return binary(lhs, rhs, mpfr_mul); }
BigReal operator/(const BigReal& lhs, const BigReal& rhs) { return binary(lhs, rhs, mpfr_div); }

bool operator==(const BigReal& lhs, const BigReal& rhs) {
  return mpfr_equal_p(lhs.value_, rhs.value_) != 0;
}

std::partial_ordering operator<=>(const BigReal& lhs, const BigReal& rhs) {
  if (mpfr_unordered_p(lhs.value_, rhs.value_)) return std::partial_ordering::unordered;
  int c = mpfr_cmp(lhs.value_, rhs.value_);
  return c < 0 ? std::partial_ordering::less
               : (c > 0 ? std::partial_ordering::greater : std::partial_ordering::equivalent);
}

BigReal abs(const BigReal& x) {
  BigReal r(x.precision());
  mpfr_abs(r.get(), x.get(), MPFR_RNDN);
  return r;
}

BigReal sqrt(const BigReal& x) {
  BigReal r(x.precision());
  mpfr_sqrt(r.get(), x.get(), MPFR_RNDN);
  return r;
}

BigReal log(const BigReal& x) {
  BigReal r(x.precision());
  mpfr_log(r.get(), x.get(), MPFR_RNDN);
  return r;
}

BigReal log1p(const BigReal& x) {
  BigReal r(x.precision());
  mpfr_log1p(r.get(), x.get(), MPFR_RNDN);
  return r;
}

BigReal exp(const BigReal& x) {
  BigReal r(x.precision());
  mpfr_exp(r.get(), x.get(), MPFR_RNDN);
  return r;
}

BigReal pow(const BigReal& base, long exponent) {
  BigReal r(base.precision());
  mpfr_pow_si(r.get(), base.get(), exponent, MPFR_RNDN);
  return r;
}

BigReal pi(Precision prec) {
  BigReal r(prec);
  mpfr_const_pi(r.get(), MPFR_RNDN);
  return r;
}

BigReal max(const BigReal& a, const BigReal& b) { return a < b ? b : a; }

BigReal power_of_two(long e, Precision prec) {
  BigReal r(1, prec);
  mpfr_mul_2si(r.get(), r.get(), e, MPFR_RNDN);
  return r;
}

std::ostream& operator<<(std::ostream& os, const BigReal& x) { return os << x.to_string(); }

}  // namespace polystar
