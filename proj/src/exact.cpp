#include "polystar/exact.hpp"

#include <cmath>
#include <functional>

#include "polystar/chain_sum.hpp"
#include "polystar/errors.hpp"

namespace polystar {

namespace {

void require_positive(long n, const char* what) {
  if (n < 1) throw Error(ErrorCode::Domain, std::string(what) + " must be >= 1");
}

Rational inverse_power(long n, int s) {
  BigInt d;
  mpz_ui_pow_ui(d.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(s));
  return Rational(BigInt(1), d);
}

// Binomial average sum_k C(n,k) p^k (1-p)^{n-k} values[k].
Rational binomial_average(long n, const Rational& p, const std::vector<Rational>& values) {
  const Rational q = Rational(1) - p;
  Rational sum;
  for (long k = 1; k <= n; ++k) {
    sum += Rational(binomial(n, k)) * pow(p, k) * pow(q, n - k) * values[static_cast<size_t>(k)];
  }
  return sum;
}

}  // namespace

Rational gen_harmonic(long k, int s, const Rational& a) {
  Rational sum;
  Rational power(1);
  for (long j = 1; j <= k; ++j) {
    power *= a;
    sum += power * inverse_power(j, s);
  }
  return sum;
}

std::vector<Rational> mhsv_prefix(long k_max, const Composition& s, const Rational& a) {
  const int d = s.depth();
  const size_t K = static_cast<size_t>(std::max(k_max, 0L));
  // t[m] holds T_i(m) for the level currently being built, from i = d down to 1.
  std::vector<Rational> t(K + 1);
  Rational power(1);
  for (size_t m = 1; m <= K; ++m) {
    power *= a;
    t[m] = t[m - 1] + power * inverse_power(static_cast<long>(m), s[static_cast<size_t>(d - 1)]);
  }
  for (int i = d - 2; i >= 0; --i) {
    std::vector<Rational> next(K + 1);
    for (size_t m = 1; m <= K; ++m) {
      next[m] = next[m - 1] + t[m] * inverse_power(static_cast<long>(m), s[static_cast<size_t>(i)]);
    }
    t = std::move(next);
  }
  return t;
}

Rational mhsv(long k, const Composition& s, const Rational& a) {
  if (k <= 0) return Rational();
  return mhsv_prefix(k, s, a).back();
}

Rational mneimneh_lhs(const FiniteSumParams& params) {
  return binomial_average(params.n, params.p, mhsv_prefix(params.n, params.s, params.a));
}

Rational main_rhs(const FiniteSumParams& params) {
  const Rational one(1);
  if (params.p == one) return main_rhs_literal(params);
  const Rational q = one - params.p;
  const Rational q_inv = inverse(q);
  FactorSpec spec;
  for (long pos = 1; pos <= params.s.weight(); ++pos) {
    Rational base(1);
    if (params.s.is_block_start(pos)) base *= q;
    if (params.s.is_block_end(pos)) base *= q_inv;
    spec.factors.push_back({base, 1});
  }
  spec.tail = TailTerm{q + params.a * params.p, q};
  return dp_chain_sum<Rational>(spec, params.n);
}

Rational main_rhs_literal(const FiniteSumParams& params) {
  const Rational one(1);
  const Rational q = one - params.p;
  const Rational top = q + params.a * params.p;
  const size_t L = static_cast<size_t>(params.s.weight());
  IndexChain chain(L);
  Rational sum;
  std::function<void(size_t, long, const Rational&)> rec = [&](size_t i, long upper,
                                                                 const Rational& denom) {
    if (i == L) {
      long n_last = chain[L - 1];
      sum += pow(q, q_of(params.s, chain)) * (pow(top, n_last) - pow(q, n_last)) / denom;
      return;
    }
    for (long v = 1; v <= upper; ++v) {
      chain[i] = v;
      rec(i + 1, v, denom * Rational(v));
    }
  };
  rec(0, params.n, one);
  return sum;
}

SidePair mneimneh_orig(long n, const Rational& p) {
  require_positive(n, "n");
  std::vector<Rational> harmonic(static_cast<size_t>(n) + 1);
  for (long k = 1; k <= n; ++k) harmonic[static_cast<size_t>(k)] = harmonic[static_cast<size_t>(k - 1)] + Rational(BigInt(1), BigInt(k));
  SidePair out{binomial_average(n, p, harmonic), Rational()};
  const Rational q = Rational(1) - p;
  for (long k = 1; k <= n; ++k) out.rhs += (Rational(1) - pow(q, k)) / Rational(k);
  return out;
}

SidePair gencev_d1(long n, int s, const Rational& a, const Rational& p) {
  require_positive(n, "n");
  require_positive(s, "s");
  const Rational one(1);
  if (p == one) throw Error(ErrorCode::Domain, "gencev_d1 needs p != 1");
  std::vector<Rational> harmonic(static_cast<size_t>(n) + 1);
  for (long k = 1; k <= n; ++k) {
    harmonic[static_cast<size_t>(k)] = harmonic[static_cast<size_t>(k - 1)] + pow(a, k) * inverse_power(k, s);
  }
  const Rational q = one - p;
  FactorSpec spec;
  spec.factors.push_back({q, 1});
  for (int i = 1; i < s; ++i) spec.factors.push_back({one, 1});
  spec.tail = TailTerm{one + a * p / q, one};
  return {binomial_average(n, p, harmonic), dp_chain_sum<Rational>(spec, n)};
}

SidePair mn1(long n, int d, const Rational& a, const Rational& p) {
  require_positive(n, "n");
  require_positive(d, "d");
  const Rational q = Rational(1) - p;
  FactorSpec spec;
  for (int i = 0; i < d; ++i) spec.factors.push_back({Rational(1), 1});
  spec.tail = TailTerm{q + a * p, q};
  return {mneimneh_lhs({n, Composition::ones(d), a, p}), naive_chain_sum<Rational>(spec, n)};
}

SidePair example_first(long n) {
  require_positive(n, "n");
  SidePair out;
  Rational inner, middle;
  for (long k = 1; k <= n; ++k) {
    // inner = sum_{i<=k} (-1)^{i-1}/i^2, middle = sum_{j<=k} inner_j / j^3
    Rational term = inverse_power(k, 2);
    inner += (k % 2 == 1) ? term : -term;
    middle += inner * inverse_power(k, 3);
    out.lhs += Rational(binomial(n, k)) * middle;
  }
  FactorSpec spec;
  const Rational half(1, 2), two(2);
  spec.factors = {{half, 1}, {Rational(1), 1}, {two, 1}, {half, 1}, {Rational(1), 1}};
  out.rhs = pow(two, n) * dp_chain_sum<Rational>(spec, n);
  return out;
}

SidePair dilcher_plus(long n, int d, const Rational& a) {
  require_positive(n, "n");
  require_positive(d, "d");
  auto z = mhsv_prefix(n, Composition::ones(d), a);
  SidePair out;
  for (long k = 1; k <= n; ++k) {
    Rational term = Rational(binomial(n, k)) * z[static_cast<size_t>(k)];
    out.lhs += (k % 2 == 0) ? term : -term;
  }
  out.rhs = (pow(Rational(1) - a, n) - Rational(1)) * inverse_power(n, d);
  return out;
}

SidePair dilcher_a2(long n, int d) {
  require_positive(n, "n");
  require_positive(d, "d");
  auto z = mhsv_prefix(n, Composition::ones(d), Rational(2));
  SidePair out;
  for (long k = 1; k <= n; ++k) {
    Rational term = Rational(binomial(n, k)) * z[static_cast<size_t>(k)];
    out.lhs += (k % 2 == 1) ? term : -term;
  }
  if (n % 2 == 1) out.rhs = Rational(2) * inverse_power(n, d);
  return out;
}

SidePair odd_binom_sum(long n, int d) {
  require_positive(n, "n");
  require_positive(d, "d");
  SidePair out;
  for (long k = 1; k <= (n + 1) / 2; ++k) {
    out.lhs += Rational(binomial(n, 2 * k - 1)) * inverse_power(2 * k - 1, d);
  }
  out.rhs = mhsv(n, Composition::ones(d), Rational(2)) / Rational(2);
  return out;
}

SidePair dilcher_classic(long n, int d) {
  require_positive(n, "n");
  require_positive(d, "d");
  SidePair out;
  for (long k = 1; k <= n; ++k) {
    Rational term = Rational(binomial(n, k)) * inverse_power(k, d);
    out.lhs += (k % 2 == 1) ? term : -term;
  }
  out.rhs = mhsv(n, Composition::ones(d), Rational(1));
  return out;
}

SidePair p_degenerate(const FiniteSumParams& params) {
  if (params.p.is_zero()) return {main_rhs(params), Rational()};
  if (params.p == Rational(1)) return {main_rhs(params), mhsv(params.n, params.s, params.a)};
  throw Error(ErrorCode::Domain, "p_degenerate needs p in {0, 1}");
}

Rational mean_lhs(long n, const Composition& s, const Rational& a) {
  require_positive(n, "n");
  auto z = mhsv_prefix(n, s, a);
  Rational sum;
  for (long k = 1; k <= n; ++k) sum += z[static_cast<size_t>(k)];
  return sum / Rational(n + 1);
}

Rational mean_rhs(long n, const Composition& s, const Rational& a) {
  require_positive(n, "n");
  return dp_q_coupled<Rational>({s, KernelForm::MeanFull, a}, n);
}

Rational mean_example1_rhs(long n, int d) {
  require_positive(n, "n");
  require_positive(d, "d");
  std::vector<Rational> t(static_cast<size_t>(n) + 1);
  for (long m = 1; m <= n; ++m) t[static_cast<size_t>(m)] = t[static_cast<size_t>(m - 1)] + Rational(BigInt(1), BigInt(m + 1));
  for (int level = 1; level < d; ++level) {
    std::vector<Rational> next(t.size());
    for (long m = 1; m <= n; ++m) {
      next[static_cast<size_t>(m)] = next[static_cast<size_t>(m - 1)] + t[static_cast<size_t>(m)] / Rational(m);
    }
    t = std::move(next);
  }
  return t.back();
}

SidePair mean_sum_hk(long n) {
  require_positive(n, "n");
  SidePair out;
  Rational h;
  for (long k = 1; k <= n; ++k) {
    h += Rational(BigInt(1), BigInt(k));
    out.lhs += h;
  }
  Rational h_next = h + Rational(BigInt(1), BigInt(n + 1));
  out.rhs = Rational(n + 1) * (h_next - Rational(1));
  return out;
}

Composition pan_xu_composition(const std::vector<int>& u, const std::vector<int>& m) {
  if (u.size() != m.size() + 1) throw Error(ErrorCode::Schema, "Pan-Xu needs |u| = |m| + 1");
  std::vector<int> parts;
  for (size_t i = 0; i < u.size(); ++i) {
    if (u[i] < 0 || (i < m.size() && m[i] < 0)) throw Error(ErrorCode::Schema, "Pan-Xu entries must be >= 0");
    parts.insert(parts.end(), static_cast<size_t>(u[i]), 1);
    if (i < m.size()) parts.push_back(m[i] + 2);
  }
  if (parts.empty()) throw Error(ErrorCode::Schema, "Pan-Xu composition is empty");
  return Composition(std::move(parts));
}

SidePair pan_xu_check(long n, const std::vector<int>& u, const std::vector<int>& m,
                      const Rational& x, const Rational& y) {
  require_positive(n, "n");
  const Rational total = x + y;
  if (total.is_zero()) throw Error(ErrorCode::Domain, "Pan-Xu needs x + y != 0");
  Composition s = pan_xu_composition(u, m);
  auto z = mhsv_prefix(n, s, Rational(1));
  SidePair out;
  for (long k = 1; k <= n; ++k) {
    out.lhs += Rational(binomial(n, k)) * pow(x, k) * pow(y, n - k) * z[static_cast<size_t>(k)];
  }
  out.rhs = pow(total, n) * main_rhs({n, s, Rational(1), x / total});
  return out;
}

Rational aux_rhs(AuxVariant variant, long n, const Rational& a, const Rational& x) {
  require_positive(n, "n");
  const Rational one(1);
  Rational sum;
  for (long j = 1; j <= n; ++j) {
    Rational term = variant == AuxVariant::Aux1 ? pow(one + a * x, j) - one
                                                : pow(one + x, j) - pow(one + x - a * x, j);
    sum += term / Rational(j);
  }
  return sum;
}

QuadratureResult aux_integral(AuxVariant variant, long n, const Rational& a, const Rational& x,
                              double tol, Precision prec) {
  require_positive(n, "n");
  const BigReal one(1, prec);
  const BigReal xr(x, prec);
  const BigReal at_zero = BigReal(n, prec) * xr;
  auto f = [&](const BigReal& A) {
    if (A.is_zero()) return at_zero;
    return (pow(one + A * xr, n) - one) / A;
  };
  BigReal lo = variant == AuxVariant::Aux1 ? BigReal(0, prec) : BigReal(Rational(1) - a, prec);
  BigReal hi = variant == AuxVariant::Aux1 ? BigReal(a, prec) : BigReal(1, prec);
  if (hi < lo) {
    QuadratureResult r = adaptive_quadrature(f, hi, lo, tol);
    r.value = -r.value;
    return r;
  }
  return adaptive_quadrature(f, lo, hi, tol);
}

}  // namespace polystar
