#include "polystar/rational.hpp"

#include <cctype>
#include <ostream>

#include "polystar/errors.hpp"

namespace polystar {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::Domain: return "DOMAIN";
    case ErrorCode::NotConverged: return "NOT_CONVERGED";
    case ErrorCode::PairingUnavailable: return "PAIRING_UNAVAILABLE";
    case ErrorCode::BudgetExceeded: return "BUDGET_EXCEEDED";
    case ErrorCode::RescaleRequired: return "RESCALE_REQUIRED";
    case ErrorCode::LengthMismatch: return "LENGTH_MISMATCH";
    case ErrorCode::Schema: return "SCHEMA";
    case ErrorCode::InvariantViolation: return "INVARIANT_VIOLATION";
    case ErrorCode::UnknownConstraint: return "UNKNOWN_CONSTRAINT";
  }
  return "UNKNOWN";
}

Rational::Rational(const BigInt& num, const BigInt& den) : value_(num, den) {
  if (den == 0) throw Error(ErrorCode::Domain, "rational with zero denominator");
  value_.canonicalize();
}

Rational& Rational::operator/=(const Rational& rhs) {
  if (rhs.is_zero()) throw Error(ErrorCode::Domain, "division by zero");
  value_ /= rhs.value_;
  return *this;
}

namespace {

bool parse_digits(std::string_view text, BigInt& out) {
  if (text.empty()) return false;
  for (char c : text) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  out.set_str(std::string(text), 10);
  return true;
}

[[noreturn]] void bad_number(std::string_view text) {
  throw Error(ErrorCode::Schema, "not a rational number: '" + std::string(text) + "'");
}

}  // namespace

Rational Rational::parse(std::string_view text) {
  std::string_view body = text;
  bool negative = false;
  if (!body.empty() && (body.front() == '-' || body.front() == '+')) {
    negative = body.front() == '-';
    body.remove_prefix(1);
  }
  if (body.empty()) bad_number(text);

  Rational result;
  if (auto slash = body.find('/'); slash != std::string_view::npos) {
    BigInt num, den;
    if (!parse_digits(body.substr(0, slash), num) ||
        !parse_digits(body.substr(slash + 1), den) || den == 0) {
      bad_number(text);
    }
    result = Rational(num, den);
  } else {
    long exponent = 0;
    if (auto e = body.find_first_of("eE"); e != std::string_view::npos) {
      std::string_view exp_text = body.substr(e + 1);
      bool exp_negative = false;
      if (!exp_text.empty() && (exp_text.front() == '-' || exp_text.front() == '+')) {
        exp_negative = exp_text.front() == '-';
        exp_text.remove_prefix(1);
      }
      BigInt exp_value;
      if (!parse_digits(exp_text, exp_value) || exp_value > 10000) bad_number(text);
      exponent = exp_value.get_si() * (exp_negative ? -1 : 1);
      body = body.substr(0, e);
    }
    std::string digits;
    if (auto dot = body.find('.'); dot != std::string_view::npos) {
      std::string_view whole = body.substr(0, dot);
      std::string_view frac = body.substr(dot + 1);
      if (whole.empty() && frac.empty()) bad_number(text);
      digits = std::string(whole) + std::string(frac);
      exponent -= static_cast<long>(frac.size());
    } else {
      digits = std::string(body);
    }
    BigInt mantissa;
    if (!parse_digits(digits, mantissa)) bad_number(text);
    BigInt scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(exponent < 0 ? -exponent : exponent));
    result = exponent < 0 ? Rational(mantissa, scale) : Rational(BigInt(mantissa * scale));
  }
  return negative ? -result : result;
}

std::string Rational::to_string() const {
  if (is_integer()) return value_.get_num().get_str();
  return value_.get_str();
}

Rational abs(const Rational& x) { return x.sign() < 0 ? -x : x; }

Rational pow(const Rational& base, long exponent) {
  if (exponent == 0) return Rational(1);
  if (exponent < 0) return pow(inverse(base), -exponent);
  BigInt num, den;
  auto e = static_cast<unsigned long>(exponent);
  mpz_pow_ui(num.get_mpz_t(), base.get().get_num_mpz_t(), e);
  mpz_pow_ui(den.get_mpz_t(), base.get().get_den_mpz_t(), e);
  mpq_class q;
  mpz_swap(q.get_num_mpz_t(), num.get_mpz_t());
  mpz_swap(q.get_den_mpz_t(), den.get_mpz_t());
  return Rational(q);
}

Rational inverse(const Rational& x) {
  if (x.is_zero()) throw Error(ErrorCode::Domain, "inverse of zero");
  return Rational(x.denominator(), x.numerator());
}

std::ostream& operator<<(std::ostream& os, const Rational& x) { return os << x.to_string(); }

}  // namespace polystar
