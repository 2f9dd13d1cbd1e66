#pragma once

#include <functional>
#include <vector>

#include "polystar/bigreal.hpp"
#include "polystar/rational.hpp"

namespace polystar {

struct EvalResult {
  BigReal value;
  BigReal error_estimate;
  long terms_used = 0;
  long truncation_level = 0;
  bool converged = true;
};

// C(n, k); 0 when k > n.
BigInt binomial(unsigned long n, unsigned long k);

// sum_{k=1}^m C(m,k)/C(n,k), requires 1 <= m <= n.
Rational binom_ratio_sum(long m, long n);

using Integrand = std::function<BigReal(const BigReal&)>;

struct QuadratureResult {
  BigReal value;
  BigReal error_estimate;
  long panels = 0;
};

// Adaptive bisection with a 20-point Gauss-Legendre rule; absolute error <= tol.
// Throws NotConverged once 2^20 panels have been used.
QuadratureResult adaptive_quadrature(const Integrand& f, const BigReal& lo, const BigReal& hi,
                                     double tol);

// Tail terms (ln N)^r / N^j for 1 <= j <= max_inverse_power, 0 <= r <= max_log_power,
// ordered by j then r. The default is {1/N, ln N/N}.
struct TailModel {
  int max_inverse_power = 1;
  int max_log_power = 1;

  int terms() const { return max_inverse_power * (max_log_power + 1); }
};

struct Sample {
  long n;
  BigReal value;
};

struct Extrapolation {
  BigReal value;
  BigReal error_estimate;
  bool fitted = true;
};

// Fits S(N) = S_inf + tail over the last window of samples and compares with the fit
// one sample earlier. Falls back to the last raw value if the system is singular.
Extrapolation richardson(const std::vector<Sample>& samples, const TailModel& model = {});

}  // namespace polystar
