#pragma once

#include <vector>

#include "polystar/bigreal.hpp"
#include "polystar/compositions.hpp"
#include "polystar/numeric.hpp"
#include "polystar/rational.hpp"

namespace polystar {

struct FiniteSumParams {
  long n = 1;
  Composition s = Composition({1});
  Rational a = Rational(1);
  Rational p = Rational(1, 2);
};

struct SidePair {
  Rational lhs;
  Rational rhs;
};

// H_k^{(s)}(a) = sum_{j<=k} a^j / j^s
Rational gen_harmonic(long k, int s, const Rational& a);

// zeta*_k(s; a) = sum_{k >= n_1 >= ... >= n_d >= 1} a^{n_d} / prod n_i^{s_i}
Rational mhsv(long k, const Composition& s, const Rational& a);
// zeta*_k(s; a) for every k in [0, k_max].
std::vector<Rational> mhsv_prefix(long k_max, const Composition& s, const Rational& a);

// M_n^{(s)}(a, p) = sum_k C(n,k) p^k (1-p)^{n-k} zeta*_k(s; a)
Rational mneimneh_lhs(const FiniteSumParams& params);
// Chain-sum side of the transformation; p = 1 goes through main_rhs_literal.
Rational main_rhs(const FiniteSumParams& params);
// Term-by-term enumeration of the chain-sum side with (1-p)^Q and 0^0 = 1.
Rational main_rhs_literal(const FiniteSumParams& params);

// sum_k C(n,k) p^k (1-p)^{n-k} H_k  vs  sum_k (1 - (1-p)^k)/k
SidePair mneimneh_orig(long n, const Rational& p);
// M_n^{(s)}(a,p) for a single order s vs the s-fold chain with (1-p)^{n_1} and (1 + ap/(1-p))^{n_s} - 1.
SidePair gencev_d1(long n, int s, const Rational& a, const Rational& p);
// s = {1}_d: chain side sum [(1-p+ap)^{n_d} - (1-p)^{n_d}] / (n_1...n_d) by enumeration.
SidePair mn1(long n, int d, const Rational& a, const Rational& p);
// sum_k C(n,k) sum_{j<=k} (sum_{i<=j} (-1)^{i-1}/i^2)/j^3  vs  sum over 5-chains of 2^{n-n_1+n_3-n_4}/(n_1...n_5)
SidePair example_first(long n);

// sum_k C(n,k)(-1)^k zeta*_k({1}_d; a)  vs  ((1-a)^n - 1)/n^d
SidePair dilcher_plus(long n, int d, const Rational& a);
// sum_k C(n,k)(-1)^{k-1} zeta*_k({1}_d; 2)  vs  0 (n even), 2/n^d (n odd)
SidePair dilcher_a2(long n, int d);
// sum_{k <= (n+1)/2} C(n, 2k-1)/(2k-1)^d  vs  zeta*_n({1}_d; 2)/2
SidePair odd_binom_sum(long n, int d);
// sum_k C(n,k)(-1)^{k-1}/k^d  vs  zeta*_n({1}_d)
SidePair dilcher_classic(long n, int d);
// main_rhs at p in {0, 1}  vs  0 or zeta*_n(s; a)
SidePair p_degenerate(const FiniteSumParams& params);

// (1/(n+1)) sum_{k<=n} zeta*_k(s; a)
Rational mean_lhs(long n, const Composition& s, const Rational& a);
// Binomial-ratio chain sum of length |s|+1, evaluated by the Q-coupled DP.
Rational mean_rhs(long n, const Composition& s, const Rational& a);
// sum over d-chains of 1/(n_1...n_{d-1} (n_d + 1))
Rational mean_example1_rhs(long n, int d);
// sum_{k<=n} H_k  vs  (n+1)(H_{n+1} - 1)
SidePair mean_sum_hk(long n);

// Composition ({1}_{u_1}, m_1+2, ..., {1}_{u_r}, m_r+2, {1}_{u_{r+1}}).
Composition pan_xu_composition(const std::vector<int>& u, const std::vector<int>& m);
// sum_k C(n,k) x^k y^{n-k} zeta*_k(s)  vs  (x+y)^n main_rhs(n, s, 1, x/(x+y))
SidePair pan_xu_check(long n, const std::vector<int>& u, const std::vector<int>& m,
                      const Rational& x, const Rational& y);

enum class AuxVariant { Aux1, Aux2 };

// Aux1: sum_j ((1+ax)^j - 1)/j.  Aux2: sum_j ((1+x)^j - (1+x-ax)^j)/j.
Rational aux_rhs(AuxVariant variant, long n, const Rational& a, const Rational& x);
// Integral of ((1+Ax)^n - 1)/A over [0, a] (Aux1) or [1-a, 1] (Aux2); value n x at A = 0.
QuadratureResult aux_integral(AuxVariant variant, long n, const Rational& a, const Rational& x,
                              double tol, Precision prec = kDefaultPrecision);

}  // namespace polystar
