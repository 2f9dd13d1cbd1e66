#include "polystar/numeric.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <optional>
#include <utility>

#include "polystar/errors.hpp"

namespace polystar {

BigInt binomial(unsigned long n, unsigned long k) {
  BigInt r;
  if (k > n) return r;
  mpz_bin_uiui(r.get_mpz_t(), n, k);
  return r;
}

Rational binom_ratio_sum(long m, long n) {
  if (m < 1 || m > n) throw Error(ErrorCode::Domain, "binom_ratio_sum needs 1 <= m <= n");
  Rational sum;
  for (long k = 1; k <= m; ++k) {
    sum += Rational(binomial(m, k), binomial(n, k));
  }
  return sum;
}

namespace {

constexpr int kGaussOrder = 20;
constexpr long kPanelBudget = 1L << 20;

struct GaussRule {
  std::vector<BigReal> nodes;    // on [-1, 1]
  std::vector<BigReal> weights;
};

// Legendre P_n and its derivative at x by the three-term recurrence.
std::pair<BigReal, BigReal> legendre(int n, const BigReal& x) {
  Precision prec = x.precision();
  BigReal p0(1, prec);
  BigReal p1 = x;
  for (int k = 2; k <= n; ++k) {
    BigReal p2 = (BigReal(2 * k - 1, prec) * x * p1 - BigReal(k - 1, prec) * p0);
    p2 /= static_cast<unsigned long>(k);
    p0 = std::move(p1);
    p1 = std::move(p2);
  }
  // P_n'(x) = n (x P_n - P_{n-1}) / (x^2 - 1)
  BigReal one(1, prec);
  BigReal dp = BigReal(n, prec) * (x * p1 - p0) / (x * x - one);
  return {p1, dp};
}

const GaussRule& gauss_rule(Precision prec) {
  static std::mutex mutex;
  static std::map<Precision, GaussRule> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(prec);
  if (it != cache.end()) return it->second;

  Precision work = prec + 32;
  GaussRule rule;
  BigReal tiny = power_of_two(-static_cast<long>(work) + 4, work);
  for (int i = 1; i <= kGaussOrder; ++i) {
    BigReal x = BigReal::from_double(std::cos(M_PI * (i - 0.25) / (kGaussOrder + 0.5)), work);
    for (int iter = 0; iter < 100; ++iter) {
      auto [p, dp] = legendre(kGaussOrder, x);
      BigReal step = p / dp;
      x -= step;
      if (abs(step) < tiny) break;
    }
    auto [p, dp] = legendre(kGaussOrder, x);
    BigReal one(1, work);
    BigReal w = BigReal(2, work) / ((one - x * x) * dp * dp);
    rule.nodes.push_back(x);
    rule.weights.push_back(w);
  }
  for (auto& v : rule.nodes) mpfr_prec_round(v.get(), prec, MPFR_RNDN);
  for (auto& v : rule.weights) mpfr_prec_round(v.get(), prec, MPFR_RNDN);
  return cache.emplace(prec, std::move(rule)).first->second;
}

BigReal gauss_panel(const Integrand& f, const BigReal& a, const BigReal& b, const GaussRule& rule) {
  Precision prec = a.precision();
  BigReal half = (b - a);
  half /= 2ul;
  BigReal mid = (a + b);
  mid /= 2ul;
  BigReal sum(prec);
  for (size_t i = 0; i < rule.nodes.size(); ++i) {
    sum += rule.weights[i] * f(mid + half * rule.nodes[i]);
  }
  return sum * half;
}

}  // namespace

QuadratureResult adaptive_quadrature(const Integrand& f, const BigReal& lo, const BigReal& hi,
                                     double tol) {
  if (!(tol > 0)) throw Error(ErrorCode::Domain, "quadrature tolerance must be positive");
  Precision prec = std::max(lo.precision(), hi.precision());
  const GaussRule& rule = gauss_rule(prec);
  QuadratureResult result{BigReal(prec), BigReal(prec), 0};
  BigReal length = abs(hi - lo);
  if (length.is_zero()) return result;
  BigReal tol_density = BigReal::from_double(tol, prec) / length;

  struct Panel {
    BigReal a, b, estimate;
  };
  std::vector<Panel> stack;
  stack.push_back({lo, hi, gauss_panel(f, lo, hi, rule)});
  long panels = 1;
  while (!stack.empty()) {
    Panel panel = std::move(stack.back());
    stack.pop_back();
    BigReal mid = panel.a + panel.b;
    mid /= 2ul;
    BigReal left = gauss_panel(f, panel.a, mid, rule);
    BigReal right = gauss_panel(f, mid, panel.b, rule);
    panels += 2;
    BigReal refined = left + right;
    BigReal diff = abs(refined - panel.estimate);
    if (diff <= tol_density * abs(panel.b - panel.a)) {
      result.value += refined;
      result.error_estimate += diff;
      continue;
    }
    if (panels >= kPanelBudget) {
      throw Error(ErrorCode::NotConverged, "quadrature panel budget exhausted");
    }
    stack.push_back({mid, panel.b, std::move(right)});
    stack.push_back({panel.a, std::move(mid), std::move(left)});
  }
  result.panels = panels;
  return result;
}

namespace {

// Solves the square system for S_inf using `k` tail terms on samples[first, first+k+1).
std::optional<BigReal> fit_limit(const std::vector<Sample>& samples, size_t first, int k,
                                 const TailModel& model) {
  if (k == 0) return samples[first].value;
  const size_t size = static_cast<size_t>(k) + 1;
  Precision prec = samples[first].value.precision();

  std::vector<std::vector<BigReal>> m(size, std::vector<BigReal>(size + 1, BigReal(prec)));
  for (size_t row = 0; row < size; ++row) {
    const Sample& s = samples[first + row];
    BigReal n(s.n, prec);
    BigReal ln = log(n);
    m[row][0] = BigReal(1, prec);
    int col = 1;
    for (int j = 1; j <= model.max_inverse_power && col <= k; ++j) {
      BigReal inv = pow(n, -j);
      for (int r = 0; r <= model.max_log_power && col <= k; ++r, ++col) {
        m[row][col] = inv * pow(ln, r);
      }
    }
    m[row][size] = s.value;
  }
  // Column scaling keeps the pivots comparable.
  for (size_t col = 1; col < size; ++col) {
    BigReal scale = abs(m[0][col]);
    if (scale.is_zero()) return std::nullopt;
    for (size_t row = 0; row < size; ++row) m[row][col] /= scale;
  }
  BigReal eps = power_of_two(-static_cast<long>(prec) + 16, prec);
  for (size_t col = 0; col < size; ++col) {
    size_t pivot = col;
    for (size_t row = col + 1; row < size; ++row) {
      if (abs(m[row][col]) > abs(m[pivot][col])) pivot = row;
    }
    if (abs(m[pivot][col]) <= eps) return std::nullopt;
    std::swap(m[col], m[pivot]);
    for (size_t row = col + 1; row < size; ++row) {
      BigReal factor = m[row][col] / m[col][col];
      for (size_t c = col; c <= size; ++c) m[row][c] -= factor * m[col][c];
    }
  }
  std::vector<BigReal> x(size, BigReal(prec));
  for (size_t i = size; i-- > 0;) {
    BigReal acc = m[i][size];
    for (size_t c = i + 1; c < size; ++c) acc -= m[i][c] * x[c];
    x[i] = acc / m[i][i];
  }
  return x[0];
}

}  // namespace

Extrapolation richardson(const std::vector<Sample>& samples, const TailModel& model) {
  if (samples.empty()) throw Error(ErrorCode::Domain, "richardson needs samples");
  const size_t count = samples.size();
  const BigReal& last = samples.back().value;
  if (count == 1) return {last, BigReal(last.precision()), false};

  auto extrapolate = [&](size_t available) -> std::optional<BigReal> {
    int k = static_cast<int>(std::min<size_t>(model.terms(), available - 1));
    return fit_limit(samples, available - static_cast<size_t>(k) - 1, k, model);
  };
  auto current = extrapolate(count);
  auto previous = extrapolate(count - 1);
  if (!current || !previous) {
    return {last, abs(last - samples[count - 2].value), false};
  }
  return {*current, abs(*current - *previous), true};
}

}  // namespace polystar
