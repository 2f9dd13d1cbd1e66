#pragma once

#include <optional>
#include <vector>

#include "polystar/bigreal.hpp"
#include "polystar/compositions.hpp"
#include "polystar/numeric.hpp"
#include "polystar/rational.hpp"

namespace polystar {

// Factor base^n / n^power at one chain position.
struct ChainFactor {
  Rational base;
  int power = 0;
};

// Extra last-position factor alpha^n - gamma^n.
struct TailTerm {
  Rational alpha;
  Rational gamma;
};

// sum over N >= n_1 >= ... >= n_L >= 1 of prod_i base_i^{n_i} / n_i^{power_i} (times the tail).
struct FactorSpec {
  std::vector<ChainFactor> factors;
  std::optional<TailTerm> tail;

  size_t length() const { return factors.size(); }
  void validate() const;
  // Every term vanishes (a zero base, or alpha = gamma).
  bool trivially_zero() const;
};

// Exponent pairing: every base with modulus > 1 borrows the decay of the nearest earlier
// base c with |c| < 1. sigma_i is the product of borrowed c over spans covering position i;
// the chain weight becomes prod beta_eff_i^{n_i} * prod sigma_i^{n_{i-1} - n_i}.
struct PairingPlan {
  std::vector<Rational> beta;
  std::vector<Rational> sigma;
  std::optional<TailTerm> tail;  // last base folded in when a tail is present
  bool paired = false;
};

// nullopt if some modulus > 1 cannot be compensated.
std::optional<PairingPlan> plan_pairing(const FactorSpec& spec);

inline constexpr double kNaiveChainBudget = 1e7;
inline constexpr double kQStateBudget = 1e8;

// Enumerates chains in colexicographic order. Throws BudgetExceeded past 10^7 chains.
template <class T>
T naive_chain_sum(const FactorSpec& spec, long n_max, Precision prec = kDefaultPrecision);

// Prefix-sum DP in O(N L). Rational mode is exact; BigReal mode uses exponent pairing when
// available and otherwise raises RescaleRequired once a prefix exceeds 2^(prec/2).
template <class T>
T dp_chain_sum(const FactorSpec& spec, long n_max, Precision prec = kDefaultPrecision);

// Incremental form of dp_chain_sum: value() is the truncation at n().
template <class T>
class ChainSumStream {
 public:
  ChainSumStream(const FactorSpec& spec, Precision prec = kDefaultPrecision);

  void advance();
  void advance_to(long n) {
    while (n_ < n) advance();
  }
  long n() const { return n_; }
  const T& value() const { return u_.front(); }
  long terms_used() const { return n_ * static_cast<long>(u_.size()); }
  bool paired() const { return paired_; }

 private:
  std::vector<T> beta_;
  std::vector<T> sigma_;
  std::vector<bool> beta_is_one_;
  std::vector<bool> sigma_is_one_;
  std::vector<T> power_;  // beta_^n
  std::vector<int> exponent_;
  std::optional<std::pair<T, T>> tail_;
  std::optional<std::pair<T, T>> tail_power_;
  std::vector<T> u_;
  T scratch_;
  long n_ = 0;
  bool paired_ = false;
  bool guard_ = false;
  long guard_exponent_ = 0;
};

enum class KernelForm {
  MeanFull,  // binomial-ratio kernel with a^{n_{|s|+1}}, chain length |s|+1
  MeanInf,   // 1/((Q+1)(Q+n_{|s|}+1)), chain length |s|
};

struct QKernelSpec {
  Composition s;
  KernelForm form = KernelForm::MeanInf;
  Rational a = Rational(1);
};

// Truncations for every N in [0, n_max] from one bottom-up pass; O(N^2 |s|).
// Throws BudgetExceeded beyond 10^8 states.
template <class T>
std::vector<T> dp_q_coupled_all(const QKernelSpec& kernel, long n_max,
                                Precision prec = kDefaultPrecision);

template <class T>
T dp_q_coupled(const QKernelSpec& kernel, long n_max, Precision prec = kDefaultPrecision) {
  return dp_q_coupled_all<T>(kernel, n_max, prec).back();
}

struct TruncationSchedule {
  long initial = 64;
  long growth = 2;
  long max_n = 1L << 20;
  double tolerance = 1e-10;
  bool extrapolate = true;
  TailModel model{3, 3};

  void validate() const;
};

// Evaluates at N0, N0 g, N0 g^2, ... until two consecutive raw differences are <= tol/4 or
// successive extrapolants agree to tol. Returns converged = false at max N.
EvalResult adaptive_sum(const FactorSpec& spec, const TruncationSchedule& schedule,
                        Precision prec = kDefaultPrecision);

// Q kernels have polynomial tails: extrapolation only.
EvalResult adaptive_sum(const QKernelSpec& kernel, const TruncationSchedule& schedule,
                        Precision prec = kDefaultPrecision);

}  // namespace polystar
