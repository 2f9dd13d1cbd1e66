#include "polystar/chain_sum.hpp"

#include <algorithm>
#include <climits>
#include <cmath>
#include <set>

#include "polystar/errors.hpp"

namespace polystar {

namespace {

template <class T>
T make(const Rational& r, Precision prec);

template <>
Rational make<Rational>(const Rational& r, Precision) {
  return r;
}

template <>
BigReal make<BigReal>(const Rational& r, Precision prec) {
  return BigReal(r, prec);
}

// x /= n^s
void divide_power(Rational& x, long n, int s) {
  if (s == 0 || n == 1) return;
  BigInt d;
  mpz_ui_pow_ui(d.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(s));
  x /= Rational(d);
}

void divide_power(BigReal& x, long n, int s) {
  if (s == 0 || n == 1) return;
  unsigned long un = static_cast<unsigned long>(n);
  unsigned long acc = 1;
  int packed = 0;
  // Pack as many factors of n as fit in one machine word per division.
  for (int i = 0; i < s; ++i) {
    if (acc > ULONG_MAX / un) {
      mpfr_div_ui(x.get(), x.get(), acc, MPFR_RNDN);
      acc = 1;
      packed = 0;
    }
    acc *= un;
    ++packed;
  }
  if (packed) mpfr_div_ui(x.get(), x.get(), acc, MPFR_RNDN);
}

// acc = sigma * acc + term
void scale_add(Rational& acc, const Rational& sigma, bool sigma_one, const Rational& term) {
  if (!sigma_one) acc *= sigma;
  acc += term;
}

void scale_add(BigReal& acc, const BigReal& sigma, bool sigma_one, const BigReal& term) {
  if (sigma_one) {
    mpfr_add(acc.get(), acc.get(), term.get(), MPFR_RNDN);
  } else {
    mpfr_fma(acc.get(), acc.get(), sigma.get(), term.get(), MPFR_RNDN);
  }
}

PairingPlan raw_plan(const FactorSpec& spec) {
  PairingPlan plan;
  for (const auto& f : spec.factors) plan.beta.push_back(f.base);
  plan.sigma.assign(spec.length(), Rational(1));
  if (spec.tail) {
    const Rational& last = plan.beta.back();
    plan.tail = TailTerm{last * spec.tail->alpha, last * spec.tail->gamma};
    plan.beta.back() = Rational(1);
  }
  return plan;
}

}  // namespace

void FactorSpec::validate() const {
  if (factors.empty()) throw Error(ErrorCode::InvariantViolation, "factor spec needs L >= 1");
  for (const auto& f : factors) {
    if (f.power < 0) throw Error(ErrorCode::InvariantViolation, "factor powers must be >= 0");
  }
}

bool FactorSpec::trivially_zero() const {
  for (const auto& f : factors) {
    if (f.base.is_zero()) return true;
  }
  return tail && tail->alpha == tail->gamma;
}

std::optional<PairingPlan> plan_pairing(const FactorSpec& spec) {
  spec.validate();
  PairingPlan plan = raw_plan(spec);
  const size_t L = spec.length();
  const Rational one(1);

  auto modulus = [&](size_t i) {
    if (i + 1 == L && plan.tail) return std::max(abs(plan.tail->alpha), abs(plan.tail->gamma));
    return abs(plan.beta[i]);
  };

  std::vector<size_t> providers;
  std::vector<std::pair<size_t, size_t>> spans;
  for (size_t i = 0; i < L; ++i) {
    Rational m = modulus(i);
    if (m > one) {
      if (providers.empty()) return std::nullopt;
      spans.emplace_back(providers.back(), i);
      providers.pop_back();
    } else if (m < one && !m.is_zero() && i + 1 < L) {
      providers.push_back(i);
    }
  }
  if (spans.empty()) return plan;

  std::vector<Rational> sigma(L + 1, one);
  for (auto [b, e] : spans) {
    const Rational c = plan.beta[b];
    for (size_t k = b + 1; k <= e; ++k) sigma[k] *= c;
  }
  for (size_t i = 0; i < L; ++i) {
    Rational ratio = sigma[i] / sigma[i + 1];
    if (i + 1 == L && plan.tail) {
      plan.tail->alpha *= ratio;
      plan.tail->gamma *= ratio;
    } else {
      plan.beta[i] *= ratio;
    }
  }
  plan.sigma.assign(sigma.begin(), sigma.begin() + static_cast<long>(L));
  for (size_t i = 0; i < L; ++i) {
    if (abs(plan.beta[i]) > one || abs(plan.sigma[i]) > one) return std::nullopt;
  }
  if (plan.tail && (abs(plan.tail->alpha) > one || abs(plan.tail->gamma) > one)) return std::nullopt;
  plan.paired = true;
  return plan;
}

template <class T>
ChainSumStream<T>::ChainSumStream(const FactorSpec& spec, Precision prec)
    : scratch_(make<T>(Rational(), prec)) {
  spec.validate();
  PairingPlan plan;
  if constexpr (std::is_same_v<T, Rational>) {
    plan = raw_plan(spec);
  } else {
    auto paired = plan_pairing(spec);
    if (paired) {
      plan = std::move(*paired);
    } else {
      plan = raw_plan(spec);
      guard_ = true;
      guard_exponent_ = static_cast<long>(prec / 2);
    }
  }
  paired_ = plan.paired;
  const Rational one(1);
  for (size_t i = 0; i < spec.length(); ++i) {
    beta_.push_back(make<T>(plan.beta[i], prec));
    sigma_.push_back(make<T>(plan.sigma[i], prec));
    beta_is_one_.push_back(plan.beta[i] == one);
    sigma_is_one_.push_back(plan.sigma[i] == one);
    power_.push_back(make<T>(one, prec));
    exponent_.push_back(spec.factors[i].power);
    u_.push_back(make<T>(Rational(), prec));
  }
  if (plan.tail) {
    tail_.emplace(make<T>(plan.tail->alpha, prec), make<T>(plan.tail->gamma, prec));
    tail_power_.emplace(make<T>(one, prec), make<T>(one, prec));
  }
}

template <class T>
void ChainSumStream<T>::advance() {
  const long m = ++n_;
  const size_t L = u_.size();
  for (size_t k = L; k-- > 0;) {
    if (!beta_is_one_[k]) power_[k] *= beta_[k];
    if (k + 1 == L) {
      if (tail_) {
        tail_power_->first *= tail_->first;
        tail_power_->second *= tail_->second;
        scratch_ = tail_power_->first;
        scratch_ -= tail_power_->second;
        if (!beta_is_one_[k]) scratch_ *= power_[k];
      } else {
        scratch_ = power_[k];
      }
    } else {
      scratch_ = u_[k + 1];
      if (!beta_is_one_[k]) scratch_ *= power_[k];
    }
    divide_power(scratch_, m, exponent_[k]);
    scale_add(u_[k], sigma_[k], sigma_is_one_[k], scratch_);
    if constexpr (std::is_same_v<T, BigReal>) {
      if (guard_) {
        long e = u_[k].exponent();
        if (e != LONG_MIN && e > guard_exponent_) {
          throw Error(ErrorCode::RescaleRequired,
                      "unpaired interior base: prefix magnitude exceeds 2^(precision/2)");
        }
      }
    }
  }
}

template class ChainSumStream<Rational>;
template class ChainSumStream<BigReal>;

template <class T>
T dp_chain_sum(const FactorSpec& spec, long n_max, Precision prec) {
  ChainSumStream<T> stream(spec, prec);
  stream.advance_to(n_max);
  return stream.value();
}

template Rational dp_chain_sum<Rational>(const FactorSpec&, long, Precision);
template BigReal dp_chain_sum<BigReal>(const FactorSpec&, long, Precision);

template <class T>
T naive_chain_sum(const FactorSpec& spec, long n_max, Precision prec) {
  spec.validate();
  const size_t L = spec.length();
  T total = make<T>(Rational(), prec);
  if (n_max < 1) return total;
  double count = std::exp(std::lgamma(static_cast<double>(n_max + static_cast<long>(L))) -
                          std::lgamma(static_cast<double>(L + 1)) -
                          std::lgamma(static_cast<double>(n_max)));
  if (count > kNaiveChainBudget * (1 + 1e-9)) {
    throw Error(ErrorCode::BudgetExceeded, "naive enumeration beyond 10^7 chains");
  }

  // factor[i][n] = base_i^n / n^{power_i}, tail folded into the last position.
  std::vector<std::vector<T>> factor(L);
  for (size_t i = 0; i < L; ++i) {
    factor[i].reserve(static_cast<size_t>(n_max) + 1);
    factor[i].push_back(make<T>(Rational(), prec));
    for (long n = 1; n <= n_max; ++n) {
      Rational value = pow(spec.factors[i].base, n);
      if (i + 1 == L && spec.tail) value *= pow(spec.tail->alpha, n) - pow(spec.tail->gamma, n);
      T v = make<T>(value, prec);
      divide_power(v, n, spec.factors[i].power);
      factor[i].push_back(std::move(v));
    }
  }

  // Colexicographic order: the first index moves fastest.
  std::vector<long> chain(L, 1);
  T term = make<T>(Rational(), prec);
  while (true) {
    term = factor[0][static_cast<size_t>(chain[0])];
    for (size_t i = 1; i < L; ++i) term *= factor[i][static_cast<size_t>(chain[i])];
    total += term;
    size_t i = 0;
    while (i < L && chain[i] == (i == 0 ? n_max : chain[i - 1])) ++i;
    if (i == L) break;
    ++chain[i];
    for (size_t j = 0; j < i; ++j) chain[j] = chain[i];
  }
  return total;
}

template Rational naive_chain_sum<Rational>(const FactorSpec&, long, Precision);
template BigReal naive_chain_sum<BigReal>(const FactorSpec&, long, Precision);

namespace {

// Triangle n in [0, N], q in [0, N - n].
class Triangle {
 public:
  explicit Triangle(long n_max) : n_max_(n_max), offset_(static_cast<size_t>(n_max) + 2, 0) {
    for (long n = 0; n <= n_max; ++n) {
      offset_[static_cast<size_t>(n) + 1] = offset_[static_cast<size_t>(n)] + (n_max - n + 1);
    }
  }
  size_t size() const { return offset_.back(); }
  size_t at(long n, long q) const { return offset_[static_cast<size_t>(n)] + static_cast<size_t>(q); }
  long n_max() const { return n_max_; }

 private:
  long n_max_;
  std::vector<size_t> offset_;
};

template <class T>
void fill_mean_inf_kernel(std::vector<T>& layer, const Triangle& tri, Precision prec) {
  const long N = tri.n_max();
  for (long n = 1; n <= N; ++n) {
    for (long q = 0; q <= N - n; ++q) {
      T& v = layer[tri.at(n, q)];
      v = make<T>(Rational(1), prec);
      divide_power(v, (q + 1), 1);
      divide_power(v, (q + n + 1), 1);
    }
  }
}

// K(n, q) = int_0^1 (1-p)^q (1-p+ap)^n dp - 1/(q+n+1).
template <class T>
void fill_mean_full_kernel(std::vector<T>& layer, const Triangle& tri, const Rational& a,
                           Precision prec) {
  const long N = tri.n_max();
  const Rational one(1);
  const T a_t = make<T>(a, prec);
  const T one_minus_a = make<T>(one - a, prec);
  const bool backward = !std::is_same_v<T, Rational> && a.sign() < 0;
  if (a == one) {
    for (long n = 0; n <= N; ++n) {
      for (long q = 0; q <= N - n; ++q) {
        T& v = layer[tri.at(n, q)];
        v = make<T>(one, prec);
        divide_power(v, q + 1, 1);
      }
    }
  } else if (!backward) {
    for (long q = 0; q <= N; ++q) {
      T& v = layer[tri.at(0, q)];
      v = make<T>(one, prec);
      divide_power(v, q + 1, 1);
    }
    for (long n = 0; n < N; ++n) {
      for (long q = 0; q <= N - n - 1; ++q) {
        T v = one_minus_a * layer[tri.at(n, q + 1)];
        v += a_t * layer[tri.at(n, q)];
        layer[tri.at(n + 1, q)] = std::move(v);
      }
    }
  } else {
    // Stable for a < 0: I(n, q+1) = (I(n+1, q) - a I(n, q)) / (1 - a).
    T a_power = make<T>(a, prec);
    for (long n = 0; n <= N; ++n) {
      T v = make<T>(one, prec);
      v -= a_power;
      v /= one_minus_a;
      divide_power(v, n + 1, 1);
      layer[tri.at(n, 0)] = std::move(v);
      a_power *= a_t;
    }
    for (long q = 0; q < N; ++q) {
      for (long n = 0; n + q + 1 <= N; ++n) {
        T v = layer[tri.at(n + 1, q)];
        v -= a_t * layer[tri.at(n, q)];
        v /= one_minus_a;
        layer[tri.at(n, q + 1)] = std::move(v);
      }
    }
  }
  for (long n = 0; n <= N; ++n) {
    for (long q = 0; q <= N - n; ++q) {
      T inv = make<T>(one, prec);
      divide_power(inv, q + n + 1, 1);
      layer[tri.at(n, q)] -= inv;
    }
  }
}

}  // namespace

template <class T>
std::vector<T> dp_q_coupled_all(const QKernelSpec& kernel, long n_max, Precision prec) {
  const long L = kernel.s.weight();
  const long N = std::max(n_max, 0L);
  if (static_cast<double>(N) * static_cast<double>(N) * static_cast<double>(L) > kQStateBudget) {
    throw Error(ErrorCode::BudgetExceeded, "Q-coupled DP beyond 10^8 states");
  }
  Triangle tri(N);
  std::vector<T> next(tri.size(), make<T>(Rational(), prec));
  if (kernel.form == KernelForm::MeanInf) {
    fill_mean_inf_kernel(next, tri, prec);
  } else {
    fill_mean_full_kernel(next, tri, kernel.a, prec);
  }

  // Weight applied on entering position `pos` (1-based).
  auto unit_weight = [&](long pos) { return kernel.form == KernelForm::MeanInf && pos == L; };

  std::vector<T> cur(tri.size(), make<T>(Rational(), prec));
  for (long pos = L - 1; pos >= 1; --pos) {
    const bool same_block = !kernel.s.is_block_start(pos + 1);
    const bool unit = unit_weight(pos + 1);
    for (long n = 1; n <= N; ++n) {
      for (long q = 0; q <= N - n; ++q) {
        T& v = cur[tri.at(n, q)];
        v = next[tri.at(n, q)];
        if (!unit) divide_power(v, n, 1);
        if (n > 1) v += cur[same_block ? tri.at(n - 1, q + 1) : tri.at(n - 1, q)];
      }
    }
    std::swap(cur, next);
  }

  std::vector<T> out;
  out.reserve(static_cast<size_t>(N) + 1);
  out.push_back(make<T>(Rational(), prec));
  const bool unit = unit_weight(1);
  for (long n = 1; n <= N; ++n) {
    T v = next[tri.at(n, 0)];
    if (!unit) divide_power(v, n, 1);
    v += out.back();
    out.push_back(std::move(v));
  }
  return out;
}

template std::vector<Rational> dp_q_coupled_all<Rational>(const QKernelSpec&, long, Precision);
template std::vector<BigReal> dp_q_coupled_all<BigReal>(const QKernelSpec&, long, Precision);

void TruncationSchedule::validate() const {
  if (initial < 1 || growth < 2 || !(tolerance > 0) || max_n < initial) {
    throw Error(ErrorCode::Domain, "invalid truncation schedule");
  }
}

namespace {

// Even truncation points N0 * 2^{j/4} up to n_max.
std::vector<long> sample_grid(long initial, long n_max) {
  std::set<long> points;
  for (int j = 0;; ++j) {
    double x = static_cast<double>(initial) * std::pow(2.0, j / 4.0);
    long n = 2 * std::lround(x / 2.0);
    if (n > n_max) break;
    if (n >= 2) points.insert(n);
  }
  return {points.begin(), points.end()};
}

std::vector<long> checkpoints(const TruncationSchedule& schedule) {
  std::vector<long> out;
  for (long n = schedule.initial; n <= schedule.max_n; n *= schedule.growth) {
    out.push_back(n);
    if (n > schedule.max_n / schedule.growth) break;
  }
  return out;
}

std::vector<Sample> samples_up_to(const std::vector<Sample>& samples, long n) {
  std::vector<Sample> out;
  for (const auto& s : samples) {
    if (s.n <= n) out.push_back(s);
  }
  return out;
}

size_t min_samples(const TruncationSchedule& schedule) {
  return static_cast<size_t>(schedule.model.terms()) + 1;
}

}  // namespace

EvalResult adaptive_sum(const FactorSpec& spec, const TruncationSchedule& schedule, Precision prec) {
  schedule.validate();
  spec.validate();
  EvalResult result{BigReal(prec), BigReal(prec), 0, schedule.initial, true};
  if (spec.trivially_zero()) return result;

  const BigReal tol = BigReal::from_double(schedule.tolerance, prec);
  BigReal raw_tol = tol;
  raw_tol /= 4ul;
  ChainSumStream<BigReal> stream(spec, prec);
  const std::vector<long> marks = checkpoints(schedule);
  const std::vector<long> grid = sample_grid(schedule.initial, marks.back());
  std::vector<Sample> samples;
  size_t next_sample = 0;

  std::optional<BigReal> previous_raw;
  std::optional<BigReal> previous_extrapolant;
  bool raw_pending = false;
  BigReal best(prec);
  BigReal best_error(prec);
  for (long mark : marks) {
    while (next_sample < grid.size() && grid[next_sample] <= mark) {
      stream.advance_to(grid[next_sample]);
      samples.push_back({grid[next_sample], stream.value()});
      ++next_sample;
    }
    stream.advance_to(mark);
    const BigReal raw = stream.value();
    result.terms_used = stream.terms_used();
    result.truncation_level = mark;
    best = raw;
    if (previous_raw) {
      BigReal diff = abs(raw - *previous_raw);
      best_error = diff;
      if (diff <= raw_tol) {
        if (raw_pending) {
          result.value = raw;
          result.error_estimate = diff;
          return result;
        }
        raw_pending = true;
      } else {
        raw_pending = false;
      }
    }
    previous_raw = raw;

    if (schedule.extrapolate && samples.size() >= min_samples(schedule)) {
      BigReal extrapolant = richardson(samples, schedule.model).value;
      if (previous_extrapolant) {
        BigReal diff = abs(extrapolant - *previous_extrapolant);
        best = extrapolant;
        best_error = diff;
        if (diff <= tol) {
          result.value = extrapolant;
          result.error_estimate = diff;
          return result;
        }
      }
      previous_extrapolant = extrapolant;
    }
  }
  result.value = best;
  result.error_estimate = best_error;
  result.converged = false;
  return result;
}

EvalResult adaptive_sum(const QKernelSpec& kernel, const TruncationSchedule& schedule,
                        Precision prec) {
  schedule.validate();
  EvalResult result{BigReal(prec), BigReal(prec), 0, schedule.initial, true};
  if (kernel.form == KernelForm::MeanFull && kernel.a.is_zero()) return result;

  const BigReal tol = BigReal::from_double(schedule.tolerance, prec);
  const std::vector<long> marks = checkpoints(schedule);
  const long L = kernel.s.weight();
  BigReal best(prec);
  BigReal best_error = BigReal(1, prec);
  bool have_best = false;
  for (size_t k = 1; k < marks.size(); ++k) {
    const long mark = marks[k];
    std::vector<Sample> samples;
    for (long n : sample_grid(schedule.initial, mark)) samples.push_back({n, BigReal(prec)});
    if (samples_up_to(samples, marks[k - 1]).size() < min_samples(schedule)) continue;
    if (static_cast<double>(mark) * static_cast<double>(mark) * static_cast<double>(L) >
        kQStateBudget) {
      break;
    }
    std::vector<BigReal> values = dp_q_coupled_all<BigReal>(kernel, mark, prec);
    for (auto& s : samples) s.value = values[static_cast<size_t>(s.n)];
    BigReal current = richardson(samples, schedule.model).value;
    BigReal previous = richardson(samples_up_to(samples, marks[k - 1]), schedule.model).value;
    BigReal diff = abs(current - previous);
    result.terms_used += mark * mark * L / 2;
    result.truncation_level = mark;
    best = current;
    best_error = diff;
    have_best = true;
    if (diff <= tol) {
      result.value = current;
      result.error_estimate = diff;
      return result;
    }
  }
  if (!have_best) throw Error(ErrorCode::BudgetExceeded, "schedule too short for extrapolation");
  result.value = best;
  result.error_estimate = best_error;
  result.converged = false;
  return result;
}

}  // namespace polystar
