#include "polystar/polylog.hpp"

#include <cmath>
#include <mutex>

#include "polystar/errors.hpp"

namespace polystar {

namespace {

constexpr Precision kGuardBits = 32;
constexpr long kDirectTermBudget = 10'000'000;

// B_0, B_1, ..., B_m, grown on demand.
const std::vector<Rational>& bernoulli_numbers(size_t m) {
  static std::mutex mutex;
  static std::vector<Rational> table{Rational(1)};
  std::lock_guard lock(mutex);
  while (table.size() <= m) {
    const long n = static_cast<long>(table.size());
    Rational acc(0);
    for (long j = 0; j < n; ++j) acc += Rational(binomial(n + 1, j)) * table[j];
    table.push_back(-acc / Rational(n + 1));
  }
  return table;
}

BigReal rpow(long n, int s, Precision prec) { return pow(BigReal(n, prec), s); }

// Tolerance actually targeted by the direct series: well below tol, never below the precision.
double series_target(double tol, Precision prec) {
  return std::max(tol / 1024, std::ldexp(1.0, -static_cast<int>(std::min<Precision>(prec, 1000))));
}

EvalResult exact_zero(Precision prec) {
  return EvalResult{BigReal(prec), BigReal(prec), 0, 0, true};
}

EvalResult combine(EvalResult lhs, const EvalResult& rhs, int sign) {
  if (sign > 0) {
    lhs.value += rhs.value;
  } else {
    lhs.value -= rhs.value;
  }
  lhs.error_estimate += rhs.error_estimate;
  lhs.terms_used += rhs.terms_used;
  lhs.truncation_level = std::max(lhs.truncation_level, rhs.truncation_level);
  lhs.converged = lhs.converged && rhs.converged;
  return lhs;
}

EvalResult negate(EvalResult r) {
  r.value = -r.value;
  return r;
}

// sum_{n>=1} x^n / n^s for 0 < x < 1 or -1/2 <= x < 0.
EvalResult li_direct(int s, const Rational& x, double tol, Precision prec) {
  const Precision wp = prec + kGuardBits;
  const BigReal xr(x, wp);
  const BigReal ax = abs(xr);
  const double target = series_target(tol, prec);
  // Geometric tail factor: 1/(1-x) for positive x, 1 for the alternating case.
  const double tail_factor = x.sign() > 0 ? 1.0 / (1.0 - x.to_double()) : 1.0;
  BigReal sum(wp), power(1, wp), bound(wp);
  long n = 0;
  for (;;) {
    ++n;
    power *= xr;
    sum += power / rpow(n, s, wp);
    bound = abs(power) * ax / rpow(n + 1, s, wp);
    const double b = bound.to_double() * tail_factor;
    if (b <= target) {
      BigReal err = BigReal::from_double(b, prec);
      return EvalResult{sum, err, n, n, true};
    }
    if (n >= kDirectTermBudget) {
      return EvalResult{sum, BigReal::from_double(b, prec), n, n, false};
    }
  }
}

// Alternating series acceleration for -1 < x < -1/2: Li_s(x) = -sum_k (-1)^k |x|^{k+1}/(k+1)^s,
// whose coefficients are moments of a positive measure on [0, 1].
EvalResult li_alternating(int s, const Rational& x, double tol, Precision prec) {
  const Precision wp = prec + kGuardBits;
  const double target = series_target(tol, prec);
  const double rate = 3.0 + std::sqrt(8.0);
  const long n = static_cast<long>(std::ceil(std::log(4.0 / target) / std::log(rate))) + 2;
  const BigReal ax = abs(BigReal(x, wp));

  BigReal d = pow(sqrt(BigReal(8, wp)) + BigReal(3, wp), n);
  d = (d + BigReal(1, wp) / d) / BigReal(2, wp);
  BigReal b(-1, wp), c = -d, sum(wp), a_k = ax;
  for (long k = 0; k < n; ++k) {
    c = b - c;
    sum += c * (a_k / rpow(k + 1, s, wp));
    a_k *= ax;
    b *= BigReal((k + n) * (k - n), wp);
    b /= BigReal(Rational(2 * k + 1, 2) * Rational(k + 1), wp);
  }
  BigReal value = sum / d;
  // sum/d approximates sum_k (-1)^k a_k; the relative error is at most 2/rate^n times a_0.
  const double err = 2.0 * ax.to_double() * std::pow(rate, -static_cast<double>(n));
  return EvalResult{-value, BigReal::from_double(err, prec), n, n, true};
}

void check_li_args(const PolylogQuery& q) {
  if (q.xs.size() != static_cast<size_t>(q.s.depth()))
    throw Error(ErrorCode::LengthMismatch, "xs length must equal the depth of s");
  if (!(q.tol > 0)) throw Error(ErrorCode::Schema, "tolerance must be positive");
}

FactorSpec chain_spec(const Composition& s, const std::vector<Rational>& xs) {
  FactorSpec spec;
  for (size_t i = 0; i < xs.size(); ++i) spec.factors.push_back({xs[i], s[i]});
  return spec;
}

EvalResult sum_chain(const FactorSpec& spec, double tol, Precision prec) {
  if (spec.trivially_zero()) return exact_zero(prec);
  if (!plan_pairing(spec))
    throw Error(ErrorCode::PairingUnavailable, "argument with modulus > 1 cannot be paired");
  return adaptive_sum(spec, series_schedule(tol), prec);
}

std::vector<Rational> leading_ones(size_t count, const Rational& last) {
  std::vector<Rational> xs(count, Rational(1));
  xs.push_back(last);
  return xs;
}

Composition composition_of(const PolylogShape& shape) {
  if (const auto* blocks = std::get_if<ShapeBlocks>(&shape)) return shape_composition(*blocks);
  if (const auto* s = std::get_if<Composition>(&shape)) return *s;
  throw Error(ErrorCode::Schema, "identity needs a shape or a composition");
}

const ShapeBlocks& blocks_of(const PolylogShape& shape, Family family) {
  const auto* blocks = std::get_if<ShapeBlocks>(&shape);
  if (!blocks) throw Error(ErrorCode::Schema, "identity needs shape blocks");
  if (blocks->family != family) throw Error(ErrorCode::Schema, "wrong shape family");
  blocks->validate();
  return *blocks;
}

int weight_of(const PolylogShape& shape) {
  const auto* s = std::get_if<int>(&shape);
  if (!s) throw Error(ErrorCode::Schema, "identity needs an integer weight");
  if (*s < 2) throw Error(ErrorCode::Schema, "weight must be at least 2");
  return *s;
}

bool lhs_converges(const Composition& s, const Rational& a) {
  if (abs(a) > Rational(1)) return false;
  if (s[0] >= 2) return true;
  return s.depth() == 1 && a != Rational(1);
}

}  // namespace

TruncationSchedule series_schedule(double tol) {
  TruncationSchedule schedule;
  schedule.tolerance = tol;
  return schedule;
}

TruncationSchedule kernel_schedule(double tol) {
  TruncationSchedule schedule;
  schedule.tolerance = tol;
  schedule.model = TailModel{4, 2};
  return schedule;
}

EvalResult zeta(int s, Precision prec) {
  if (s < 2) throw Error(ErrorCode::Domain, "zeta needs s >= 2");
  const Precision wp = prec + kGuardBits;
  const long n = 32 + static_cast<long>(prec) / 8;
  BigReal sum(wp);
  for (long j = n - 1; j >= 1; --j) sum += BigReal(1, wp) / rpow(j, s, wp);
  const BigReal big_n(n, wp);
  const BigReal n_pow = rpow(n, s, wp);  // N^s
  sum += big_n / (n_pow * BigReal(s - 1, wp));
  sum += BigReal(1, wp) / (n_pow * BigReal(2, wp));

  // B_{2k}/(2k)! * s(s+1)...(s+2k-2) * N^{-s-2k+1}
  const BigReal eps = power_of_two(-static_cast<long>(wp), wp);
  BigReal rising(s, wp);                 // s(s+1)...(s+2k-2)
  BigReal inv_n_power = BigReal(1, wp) / (n_pow * big_n);  // N^{-s-2k+1} at k = 1
  BigReal factorial(2, wp);              // (2k)!
  const BigReal inv_n2 = BigReal(1, wp) / (big_n * big_n);
  BigReal err(wp);
  for (long k = 1;; ++k) {
    const auto& bern = bernoulli_numbers(static_cast<size_t>(2 * k));
    BigReal term = BigReal(bern[2 * k], wp) / factorial * rising * inv_n_power;
    if (abs(term) <= eps || k > 4 * n) {
      err = abs(term);
      break;
    }
    sum += term;
    rising *= BigReal((s + 2 * k - 1) * (s + 2 * k), wp);
    inv_n_power *= inv_n2;
    factorial *= BigReal((2 * k + 1) * (2 * k + 2), wp);
  }
  BigReal value(prec);
  value = sum;
  mpfr_prec_round(value.get(), prec, MPFR_RNDN);
  err += power_of_two(-static_cast<long>(prec), prec);
  return EvalResult{value, err, n, n, true};
}

EvalResult li(int s, const Rational& x, double tol, Precision prec) {
  if (s < 1) throw Error(ErrorCode::Domain, "li needs s >= 1");
  if (!(tol > 0)) throw Error(ErrorCode::Schema, "tolerance must be positive");
  const Rational one(1);
  if (abs(x) > one) throw Error(ErrorCode::Domain, "li needs |x| <= 1");
  if (x.is_zero()) return exact_zero(prec);
  if (s == 1) {
    if (x == one) throw Error(ErrorCode::Domain, "li_1(1) diverges");
    BigReal value = -log1p(-BigReal(x, prec + kGuardBits));
    mpfr_prec_round(value.get(), prec, MPFR_RNDN);
    return EvalResult{value, power_of_two(-static_cast<long>(prec) + 2, prec), 1, 1, true};
  }
  if (x == one) return zeta(s, prec);
  if (x == -one) {
    // Li_s(-1) = -(1 - 2^{1-s}) zeta(s)
    EvalResult z = zeta(s, prec);
    const BigReal factor = BigReal(1, prec) - power_of_two(1 - s, prec);
    z.value = -(factor * z.value);
    return z;
  }
  if (x.sign() < 0 && x < Rational(-1, 2)) return li_alternating(s, x, tol, prec);
  return li_direct(s, x, tol, prec);
}

EvalResult li_star(const PolylogQuery& q, Precision prec) {
  check_li_args(q);
  for (const Rational& x : q.xs)
    if (x.is_zero()) return exact_zero(prec);
  if (q.s.depth() == 1) return li(q.s[0], q.xs[0], q.tol, prec);
  if (q.xs[0] == Rational(1) && q.s[0] == 1)
    throw Error(ErrorCode::Domain, "Li* with s_1 = 1 and x_1 = 1 diverges");
  return sum_chain(chain_spec(q.s, q.xs), q.tol, prec);
}

EvalResult li_star_difference(const Composition& s, const std::vector<Rational>& prefix,
                              const Rational& alpha, const Rational& gamma, double tol,
                              Precision prec) {
  if (prefix.size() + 1 != static_cast<size_t>(s.depth()))
    throw Error(ErrorCode::LengthMismatch, "prefix must cover all but the last index");
  if (!(tol > 0)) throw Error(ErrorCode::Schema, "tolerance must be positive");
  if (alpha == gamma) return exact_zero(prec);
  if (s.depth() == 1) {
    const EvalResult first = li(s[0], alpha, tol / 2, prec);
    return combine(first, li(s[0], gamma, tol / 2, prec), -1);
  }
  if (s[0] == 1 && prefix.front() == Rational(1))
    throw Error(ErrorCode::Domain, "Li* with s_1 = 1 and x_1 = 1 diverges");
  std::vector<Rational> xs = prefix;
  xs.push_back(Rational(1));
  FactorSpec spec = chain_spec(s, xs);
  spec.tail = TailTerm{alpha, gamma};
  return sum_chain(spec, tol, prec);
}

EvalResult zeta_star(const Composition& s, double tol, Precision prec) {
  if (s[0] < 2) throw Error(ErrorCode::Domain, "zeta* needs s_1 >= 2");
  return li_star(PolylogQuery{s, std::vector<Rational>(s.depth(), Rational(1)), tol}, prec);
}

BigReal zeta_star_closed(ClosedForm form, int d, Precision prec) {
  if (d < 1) throw Error(ErrorCode::Domain, "closed forms need d >= 1");
  if (form == ClosedForm::TwoD) {
    const BigReal factor = BigReal(2, prec) - power_of_two(2 - 2 * d, prec);
    return factor * zeta(2 * d, prec).value;
  }
  BigReal value = zeta(2 * d + 1, prec).value;
  value *= 2L;
  return value;
}

bool polylog_identity_in_domain(PolylogIdentity id, const PolylogShape& shape, const Rational& a,
                                const Rational& p) {
  switch (id) {
    case PolylogIdentity::Li1Main:
    case PolylogIdentity::Li2Main:
    case PolylogIdentity::IntroSeries:
      return domain_check(Constraint::MainAp, a, p);
    case PolylogIdentity::Li1A1:
    case PolylogIdentity::Li2A1:
      return domain_check(Constraint::A1P, a, p);
    case PolylogIdentity::Li1Red1:
    case PolylogIdentity::Li1Red2:
      return domain_check(Constraint::RedBox, a, p);
    case PolylogIdentity::Li2Red1:
    case PolylogIdentity::Li2Red2:
      return domain_check(Constraint::RedBoxB, a, p);
    case PolylogIdentity::IntroRedL:
    case PolylogIdentity::IntroRedR:
      return domain_check(Constraint::IntroRed, a, p);
    case PolylogIdentity::MeanInfA:
      return lhs_converges(composition_of(shape), a);
    case PolylogIdentity::MeanInf1:
      return composition_of(shape)[0] >= 2;
  }
  return false;
}

SideResults li_identity_sides(PolylogIdentity id, const PolylogShape& shape, const Rational& a,
                              const Rational& p, double tol, Precision prec, bool check_domain) {
  if (check_domain && !polylog_identity_in_domain(id, shape, a, p))
    throw Error(ErrorCode::Domain, "parameters outside the identity's validity region");
  const Rational one(1);
  const Rational reflected = one - inverse(p);  // 1 - 1/p

  switch (id) {
    case PolylogIdentity::Li1Main:
    case PolylogIdentity::Li2Main:
    case PolylogIdentity::Li1A1:
    case PolylogIdentity::Li2A1: {
      const bool family_a = id == PolylogIdentity::Li1Main || id == PolylogIdentity::Li1A1;
      const ShapeBlocks& blocks = blocks_of(shape, family_a ? Family::A : Family::B);
      const Composition s = shape_composition(blocks);
      const std::vector<Rational> main = shape_args(blocks, ArgVariant::Main, a, p);
      const std::vector<Rational> sub = shape_args(blocks, ArgVariant::Sub, a, p);
      const std::vector<Rational> prefix(main.begin(), main.end() - 1);
      SideResults out{
          li_star(PolylogQuery{s, leading_ones(s.depth() - 1, a), tol}, prec),
          li_star_difference(Composition::ones(static_cast<int>(main.size())), prefix,
                             main.back(), sub.back(), tol, prec)};
      return out;
    }
    case PolylogIdentity::Li1Red1:
    case PolylogIdentity::Li2Red1:
    case PolylogIdentity::Li1Red2:
    case PolylogIdentity::Li2Red2: {
      const bool family_a = id == PolylogIdentity::Li1Red1 || id == PolylogIdentity::Li1Red2;
      const bool first = id == PolylogIdentity::Li1Red1 || id == PolylogIdentity::Li2Red1;
      const ShapeBlocks& blocks = blocks_of(shape, family_a ? Family::A : Family::B);
      const Composition s = shape_composition(blocks);
      const std::vector<Rational> args =
          shape_args(blocks, first ? ArgVariant::Sub : ArgVariant::Main, a, p);
      EvalResult lhs =
          li_star(PolylogQuery{Composition::ones(static_cast<int>(args.size())), args, tol}, prec);
      const std::vector<Rational> prefix(s.depth() - 1, one);
      EvalResult rhs =
          first ? negate(li_star(PolylogQuery{s, leading_ones(s.depth() - 1, reflected), tol}, prec))
                : li_star_difference(s, prefix, a, reflected, tol, prec);
      return SideResults{std::move(lhs), std::move(rhs)};
    }
    case PolylogIdentity::IntroSeries: {
      const int s = weight_of(shape);
      const ShapeBlocks blocks{Family::A, {s - 2}, {}};
      const std::vector<Rational> main = shape_args(blocks, ArgVariant::Main, a, p);
      const std::vector<Rational> prefix(main.begin(), main.end() - 1);
      return SideResults{li(s, a, tol, prec),
                         li_star_difference(Composition::ones(s), prefix, main.back(), one, tol,
                                            prec)};
    }
    case PolylogIdentity::IntroRedL:
    case PolylogIdentity::IntroRedR: {
      const int s = weight_of(shape);
      const ShapeBlocks blocks{Family::A, {s - 2}, {}};
      const bool left = id == PolylogIdentity::IntroRedL;
      const std::vector<Rational> args =
          shape_args(blocks, left ? ArgVariant::Sub : ArgVariant::Main, a, p);
      EvalResult lhs = li_star(PolylogQuery{Composition::ones(s), args, tol}, prec);
      EvalResult rhs = left ? negate(li(s, reflected, tol, prec))
                            : combine(li(s, a, tol / 2, prec), li(s, reflected, tol / 2, prec), -1);
      return SideResults{std::move(lhs), std::move(rhs)};
    }
    case PolylogIdentity::MeanInfA: {
      const Composition s = composition_of(shape);
      return SideResults{
          li_star(PolylogQuery{s, leading_ones(s.depth() - 1, a), tol}, prec),
          adaptive_sum(QKernelSpec{s, KernelForm::MeanFull, a}, kernel_schedule(tol), prec)};
    }
    case PolylogIdentity::MeanInf1: {
      const Composition s = composition_of(shape);
      return SideResults{
          zeta_star(s, tol, prec),
          adaptive_sum(QKernelSpec{s, KernelForm::MeanInf, one}, kernel_schedule(tol), prec)};
    }
  }
  throw Error(ErrorCode::Schema, "unknown identity");
}

}  // namespace polystar
