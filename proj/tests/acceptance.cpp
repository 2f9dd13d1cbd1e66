// Acceptance run: one PASS/FAIL line per criterion. With arguments, runs only the listed
// criterion numbers. Exit status is 0 iff every selected criterion passes.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "polystar/catalog.hpp"
#include "polystar/chain_sum.hpp"
#include "polystar/compositions.hpp"
#include "polystar/exact.hpp"
#include "polystar/numeric.hpp"
#include "polystar/polylog.hpp"

using namespace polystar;

namespace {

constexpr Precision kPrec = 160;

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

std::vector<Composition> compositions_up_to(int max_weight) {
  std::vector<Composition> out;
  std::function<void(std::vector<int>&, int)> rec = [&](std::vector<int>& parts, int left) {
    if (left == 0) {
      out.emplace_back(parts);
      return;
    }
    for (int part = 1; part <= left; ++part) {
      parts.push_back(part);
      rec(parts, left - part);
      parts.pop_back();
    }
  };
  for (int w = 1; w <= max_weight; ++w) {
    std::vector<int> parts;
    rec(parts, w);
  }
  return out;
}

std::vector<Rational> rationals(std::initializer_list<const char*> texts) {
  std::vector<Rational> out;
  for (const char* t : texts) out.push_back(Rational::parse(t));
  return out;
}

BigReal pi_power(long k) { return pow(pi(kPrec), k); }

BigReal zeta2_from_pi() { return pi_power(2) / BigReal(6, kPrec); }
BigReal zeta22_from_pi() { return BigReal(7, kPrec) * pi_power(4) / BigReal(360, kPrec); }

double big_diff(const BigReal& x, const BigReal& y) { return abs(x - y).to_double(); }

double value_diff(const Value& v, const BigReal& y) {
  return big_diff(std::holds_alternative<BigReal>(v) ? std::get<BigReal>(v)
                                                     : BigReal(std::get<Rational>(v), kPrec),
                  y);
}

BigReal as_big(const Value& v) {
  if (const auto* q = std::get_if<Rational>(&v)) return BigReal(*q, kPrec);
  return std::get<BigReal>(v);
}

// ---- criteria -------------------------------------------------------------------------------

Outcome c01_main_transform() {
  const auto start = Clock::now();
  long count = 0, bad = 0;
  for (const auto& s : compositions_up_to(4))
    for (long n = 1; n <= 10; ++n)
      for (const auto& a : rationals({"-1", "-1/2", "1/2", "1", "2"}))
        for (const auto& p : rationals({"-1", "1/3", "1/2", "3/4", "2"})) {
          const FiniteSumParams f{n, s, a, p};
          ++count;
          if (mneimneh_lhs(f) != main_rhs(f)) ++bad;
        }
  const double t = seconds_since(start);
  return {bad == 0 && t < 60,
          fmt("exact main transform: %ld instances, %ld mismatches, %.1f s (limit 60 s)", count, bad, t)};
}

Outcome c02_degenerate() {
  long count = 0, bad = 0;
  for (const auto& s : compositions_up_to(4))
    for (long n = 1; n <= 10; ++n)
      for (const auto& a : rationals({"-1", "-1/2", "1/2", "1", "2"})) {
        count += 2;
        if (!main_rhs(FiniteSumParams{n, s, a, Rational(0)}).is_zero()) ++bad;
        if (main_rhs(FiniteSumParams{n, s, a, Rational(1)}) != mhsv(n, s, a)) ++bad;
      }
  return {bad == 0, fmt("degenerate p in {0,1}: %ld instances, %ld mismatches", count, bad)};
}

Outcome c03_dilcher() {
  const auto start = Clock::now();
  long count = 0, bad = 0;
  auto check = [&](const SidePair& pair) {
    ++count;
    if (pair.lhs != pair.rhs) ++bad;
  };
  for (long n = 1; n <= 25; ++n)
    for (int d = 1; d <= 5; ++d) {
      for (const auto& a : rationals({"-2", "-1", "0", "1/2", "1", "2", "3"})) check(dilcher_plus(n, d, a));
      check(dilcher_a2(n, d));
      check(odd_binom_sum(n, d));
      check(dilcher_classic(n, d));
    }
  const double t = seconds_since(start);
  return {bad == 0 && t < 30,
          fmt("Dilcher family: %ld instances, %ld mismatches, %.1f s (limit 30 s)", count, bad, t)};
}

Outcome c04_mean() {
  long count = 0, bad = 0;
  for (const auto& s : compositions_up_to(4))
    for (long n = 1; n <= 12; ++n)
      for (const auto& a : rationals({"-1", "1/2", "1", "2"})) {
        ++count;
        if (mean_lhs(n, s, a) != mean_rhs(n, s, a)) ++bad;
      }
  for (int d = 1; d <= 4; ++d)
    for (long n = 1; n <= 12; ++n) {
      ++count;
      const Composition ones = Composition::ones(d);
      const Rational lhs = mean_lhs(n, ones, Rational(1));
      if (lhs != mean_example1_rhs(n, d) || lhs != mean_rhs(n, ones, Rational(1))) ++bad;
    }
  for (long n = 1; n <= 50; ++n) {
    ++count;
    const SidePair pair = mean_sum_hk(n);
    if (pair.lhs != pair.rhs) ++bad;
  }
  return {bad == 0, fmt("mean identity, {1}_d example, sum of H_k: %ld instances, %ld mismatches", count, bad)};
}

void all_vectors(size_t length, int max_entry, std::vector<std::vector<int>>& out) {
  out = {{}};
  for (size_t i = 0; i < length; ++i) {
    std::vector<std::vector<int>> next;
    for (const auto& v : out)
      for (int e = 0; e <= max_entry; ++e) {
        auto w = v;
        w.push_back(e);
        next.push_back(std::move(w));
      }
    out = std::move(next);
  }
}

Outcome c05_pan_xu() {
  const std::vector<std::pair<Rational, Rational>> xy = {
      {Rational(1), Rational(1)},         {Rational(2), Rational(-1, 3)},
      {Rational(-1, 2), Rational(3, 2)},  {Rational(3, 5), Rational(2, 7)},
      {Rational(-3), Rational(1)},        {Rational(5, 4), Rational(0)}};
  long count = 0, bad = 0;
  for (size_t r = 1; r <= 2; ++r) {
    std::vector<std::vector<int>> us, ms;
    all_vectors(r + 1, 2, us);
    all_vectors(r, 1, ms);
    for (const auto& u : us)
      for (const auto& m : ms)
        for (long n = 1; n <= 8; ++n)
          for (const auto& [x, y] : xy) {
            ++count;
            const SidePair pair = pan_xu_check(n, u, m, x, y);
            if (pair.lhs != pair.rhs) ++bad;
          }
  }
  return {bad == 0, fmt("Pan-Xu normalized form: %ld instances, %ld mismatches", count, bad)};
}

void for_each_chain(long N, size_t L, const std::function<void(const IndexChain&)>& visit) {
  IndexChain chain(L);
  std::function<void(size_t, long)> rec = [&](size_t i, long upper) {
    if (i == L) {
      visit(chain);
      return;
    }
    for (long n = 1; n <= upper; ++n) {
      chain[i] = n;
      rec(i + 1, n);
    }
  };
  rec(0, N);
}

// Truncations for every N <= n_max: each chain is bucketed by its outer index n_1.
std::vector<Rational> q_kernel_by_enumeration(const QKernelSpec& k, long n_max) {
  const size_t L = static_cast<size_t>(k.s.weight());
  std::vector<Rational> by_outer(static_cast<size_t>(n_max) + 1);
  if (k.form == KernelForm::MeanInf) {
    for_each_chain(n_max, L, [&](const IndexChain& c) {
      const long Q = q_of(k.s, c);
      Rational term(1, (Q + 1) * (Q + c[L - 1] + 1));
      for (size_t i = 0; i + 1 < L; ++i) term /= Rational(c[i]);
      by_outer[static_cast<size_t>(c[0])] += term;
    });
  } else {
    for_each_chain(n_max, L + 1, [&](const IndexChain& c) {
      const IndexChain head(c.begin(), c.end() - 1);
      const long Q = q_of(k.s, head);
      const long nl = c[L - 1], last = c[L];
      Rational term(binomial(nl, last), binomial(Q + nl, last));
      term *= pow(k.a, last);
      term /= Rational(Q + nl + 1);
      for (size_t i = 0; i < L; ++i) term /= Rational(c[i]);
      by_outer[static_cast<size_t>(c[0])] += term;
    });
  }
  for (size_t n = 1; n < by_outer.size(); ++n) by_outer[n] += by_outer[n - 1];
  return by_outer;
}

Outcome c06_oracles() {
  std::mt19937_64 rng(6);
  std::uniform_int_distribution<int> length(1, 5), n_dist(1, 25), power(0, 3), den(1, 12), coin(0, 3);
  auto base = [&] {
    const int d = den(rng);
    return Rational(std::uniform_int_distribution<int>(-2 * d, 2 * d)(rng), d);
  };
  long separable_bad = 0;
  for (int t = 0; t < 200; ++t) {
    FactorSpec spec;
    const int L = length(rng);
    for (int i = 0; i < L; ++i) spec.factors.push_back({base(), power(rng)});
    if (coin(rng) == 0) spec.tail = TailTerm{base(), base()};
    const long N = n_dist(rng);
    if (dp_chain_sum<Rational>(spec, N) != naive_chain_sum<Rational>(spec, N)) ++separable_bad;
  }
  long q_count = 0, q_bad = 0;
  for (const char* s : {"2", "2,2", "3,2", "1,1"})
    for (KernelForm form : {KernelForm::MeanInf, KernelForm::MeanFull})
      for (const auto& a : rationals({"1", "1/2", "-1"})) {
        if (form == KernelForm::MeanInf && a != Rational(1)) continue;
        const QKernelSpec kernel{Composition::parse(s), form, a};
        const std::vector<Rational> dp = dp_q_coupled_all<Rational>(kernel, 20);
        const std::vector<Rational> direct = q_kernel_by_enumeration(kernel, 20);
        for (size_t N = 1; N <= 20; ++N) {
          ++q_count;
          if (dp[N] != direct[N]) ++q_bad;
        }
      }
  return {separable_bad == 0 && q_bad == 0,
          fmt("oracle equivalence: 200 random separable specs (%ld mismatches), %ld Q-kernel truncations (%ld mismatches)",
              separable_bad, q_count, q_bad)};
}

Outcome c07_li1_example() {
  const auto start = Clock::now();
  VerifyOptions opts;
  opts.tolerance = 1e-8;
  double worst = 0, spread = 0;
  bool ok = true;
  for (int d = 1; d <= 2; ++d) {
    const BigReal target = d == 1 ? zeta2_from_pi() : zeta22_from_pi();
    std::vector<BigReal> values;
    for (const char* p : {"3/10", "1/2", "7/10"}) {
      const IdentityReport r = verify("LI1_EX", {{"d", std::to_string(d)}, {"p", p}}, opts);
      if (r.status != Status::Pass || !r.rhs) {
        ok = false;
        continue;
      }
      values.push_back(as_big(*r.rhs));
      worst = std::max(worst, value_diff(*r.rhs, target));
    }
    for (size_t i = 0; i < values.size(); ++i)
      for (size_t j = i + 1; j < values.size(); ++j) spread = std::max(spread, big_diff(values[i], values[j]));
  }
  const double t = seconds_since(start);
  ok = ok && worst <= 1e-8 && spread <= 2e-8 && t < 60;
  return {ok, fmt("a = 1 difference equals (2-4^(1-d)) zeta(2d), d in {1,2}: max error %.2e (limit 1e-8), "
                  "p-spread %.2e (limit 2e-8), %.1f s (limit 60 s)",
                  worst, spread, t)};
}

Outcome c08_li2_example() {
  BigReal two_zeta3(kPrec);
  mpfr_zeta_ui(two_zeta3.get(), 3, MPFR_RNDN);
  two_zeta3 *= 2L;
  VerifyOptions opts;
  opts.tolerance = 1e-8;
  double worst = 0;
  bool ok = true;
  for (const char* p : {"3/10", "1/2", "7/10"}) {
    const IdentityReport r = verify("LI2_EX", {{"d", "1"}, {"p", p}}, opts);
    if (r.status != Status::Pass || !r.rhs) {
      ok = false;
      continue;
    }
    worst = std::max(worst, value_diff(*r.rhs, two_zeta3));
  }
  ok = ok && worst <= 1e-8;
  return {ok, fmt("second-family difference equals 2 zeta(3): max error %.2e (limit 1e-8)", worst)};
}

Outcome c09_reductions() {
  VerifyOptions opts;
  opts.tolerance = 1e-8;
  const auto reports = verify_all(grid_jobs({"LI1_RED1", "LI1_RED2", "LI2_RED1", "LI2_RED2"}), opts, 1);
  long bad = 0, cost_checked = 0, cost_bad = 0, vanishing = 0;
  double worst = 0;
  for (const auto& r : reports) {
    if (r.status != Status::Pass || !r.abs_diff) {
      ++bad;
      continue;
    }
    const double diff = as_big(*r.abs_diff).to_double();
    worst = std::max(worst, diff);
    if (diff > 1e-8) ++bad;
    const Composition s = shape_composition(ShapeBlocks::parse(r.params.at("shape")));
    if (s.weight() < s.depth() + 2) continue;
    // At a = 1 - 1/p both sides vanish term by term and no summation is performed.
    if (r.cost.lhs_terms == 0 && r.cost.rhs_terms == 0 && as_big(*r.lhs).is_zero() &&
        as_big(*r.rhs).is_zero()) {
      ++vanishing;
      continue;
    }
    ++cost_checked;
    if (r.cost.rhs_terms >= r.cost.lhs_terms) ++cost_bad;
  }
  return {bad == 0 && cost_bad == 0 && cost_checked > 0,
          fmt("depth reductions on the RED_BOX grid: %zu instances, %ld failures, max diff %.2e (limit 1e-8); "
              "cost depth-d' < depth-|s| on %ld/%ld evaluated instances (%ld identically zero)",
              reports.size(), bad, worst, cost_checked - cost_bad, cost_checked, vanishing)};
}

Outcome c10_intro_reductions() {
  VerifyOptions opts;
  opts.tolerance = 1e-8;
  long bad = 0;
  double worst = 0, at_half = 1;
  for (int s = 2; s <= 4; ++s)
    for (const char* p : {"1/2", "3/4"}) {
      const IdentityReport r = verify("INTRO_RED_L", {{"s", std::to_string(s)}, {"p", p}}, opts);
      if (r.status != Status::Pass || !r.abs_diff) {
        ++bad;
        continue;
      }
      const double diff = as_big(*r.abs_diff).to_double();
      worst = std::max(worst, diff);
      if (diff > 1e-8) ++bad;
      if (s == 2 && std::string(p) == "1/2") {
        const BigReal target = pi_power(2) / BigReal(12, kPrec);
        at_half = value_diff(*r.lhs, target);
      }
    }
  return {bad == 0 && at_half <= 1e-8,
          fmt("Li*_{ {1}_s }(1-p, {1}) = -Li_s(1-1/p): 6 instances, max diff %.2e; at s=2, p=1/2 "
              "distance to pi^2/12 is %.2e (limit 1e-8)",
              worst, at_half)};
}

Outcome c11_mean_infinity() {
  struct Case {
    int d;
    double tol;
    BigReal target;
  };
  const std::vector<Case> cases = {{1, 1e-6, zeta2_from_pi()}, {2, 1e-5, zeta22_from_pi()}};
  bool ok = true;
  std::string detail = "Q-kernel sum at infinity with extrapolation:";
  for (const Case& c : cases) {
    VerifyOptions opts;
    opts.tolerance = c.tol;
    const IdentityReport r = verify("MEAN_EX2", {{"d", std::to_string(c.d)}}, opts);
    const double err = r.lhs ? value_diff(*r.lhs, c.target) : 1.0;
    const bool good = r.status == Status::Pass && err <= c.tol;
    ok = ok && good;
    detail += fmt(" s={2}_%d error %.2e (limit %.0e, %s)", c.d, err, c.tol, status_name(r.status));
  }
  return {ok, detail};
}

Outcome c12_aux() {
  VerifyOptions opts;
  opts.tolerance = 1e-10;
  const auto reports = verify_all(grid_jobs({"AUX1", "AUX2"}), opts, 1);
  long bad = 0;
  double worst = 0;
  for (const auto& r : reports) {
    const double diff = r.abs_diff ? as_big(*r.abs_diff).to_double() : 1.0;
    worst = std::max(worst, diff);
    if (r.status != Status::Pass || diff > 1e-10) ++bad;
  }
  return {bad == 0, fmt("quadrature vs finite sums: %zu instances, %ld failures, max diff %.2e (limit 1e-10)",
                        reports.size(), bad, worst)};
}

Outcome c13_negative_control() {
  VerifyOptions opts;
  opts.tolerance = 1e-8;
  opts.enforce_domain = false;
  long passed = 0;
  std::string states;
  for (int s = 2; s <= 4; ++s) {
    const IdentityReport r =
        verify("INTRO_SERIES", {{"s", std::to_string(s)}, {"a", "1"}, {"p", "19/20"}}, opts);
    if (r.pass) ++passed;
    const double diff = r.abs_diff ? as_big(*r.abs_diff).to_double() : -1.0;
    states += fmt(" s=%d:%s(diff %.1e)", s, status_name(r.status), diff);
  }
  const bool in_domain = domain_check(Constraint::MainAp, Rational(1), Rational(19, 20));
  return {passed == 0,
          fmt("INTRO_SERIES at (a,p)=(1,0.95) expected to fail:%s; the point is %s MAIN_AP", states.c_str(),
              in_domain ? "inside" : "outside")};
}

// Informational only: outside-domain sampling of the same identity.
std::string c13_supplement() {
  VerifyOptions opts;
  opts.tolerance = 1e-8;
  const auto reports = fuzz("INTRO_SERIES", 13, 20, opts, true);
  long pass = 0, mismatch = 0, unevaluable = 0;
  for (const auto& r : reports) {
    if (r.pass) {
      ++pass;
    } else if (r.abs_diff) {
      ++mismatch;
    } else {
      ++unevaluable;
    }
  }
  return fmt("outside-domain fuzz of INTRO_SERIES (20 points): %ld pass, %ld numerical mismatches, "
             "%ld not evaluable",
             pass, mismatch, unevaluable);
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"C01", c01_main_transform}, {"C02", c02_degenerate},     {"C03", c03_dilcher},
      {"C04", c04_mean},           {"C05", c05_pan_xu},         {"C06", c06_oracles},
      {"C07", c07_li1_example},    {"C08", c08_li2_example},    {"C09", c09_reductions},
      {"C10", c10_intro_reductions}, {"C11", c11_mean_infinity}, {"C12", c12_aux},
      {"C13", c13_negative_control}};

  std::vector<int> selected;
  for (int i = 1; i < argc; ++i) {
    const int k = std::atoi(argv[i]);
    if (k < 1 || k > static_cast<int>(criteria.size())) {
      std::fprintf(stderr, "unknown criterion '%s'\n", argv[i]);
      return 2;
    }
    selected.push_back(k);
  }
  if (selected.empty())
    for (size_t k = 1; k <= criteria.size(); ++k) selected.push_back(static_cast<int>(k));

  bool all = true;
  for (int k : selected) {
    const auto& [name, run] = criteria[static_cast<size_t>(k - 1)];
    Outcome outcome;
    try {
      outcome = run();
    } catch (const std::exception& e) {
      outcome = {false, std::string("error: ") + e.what()};
    }
    std::printf("[%s] %s %s\n", outcome.pass ? "PASS" : "FAIL", name, outcome.detail.c_str());
    if (k == 13) std::printf("       info: %s\n", c13_supplement().c_str());
    std::fflush(stdout);
    all = all && outcome.pass;
  }
  return all ? 0 : 1;
}
