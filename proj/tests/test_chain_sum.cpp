#include <functional>
#include <random>

#include <gtest/gtest.h>

#include "polystar/chain_sum.hpp"
#include "polystar/errors.hpp"
#include "polystar/numeric.hpp"

using namespace polystar;

namespace {

const Precision kPrec = 160;

BigReal zeta2() {
  BigReal p = pi(kPrec);
  BigReal r = p * p;
  r /= 6ul;
  return r;
}

FactorSpec spec_of(std::vector<std::pair<Rational, int>> factors) {
  FactorSpec spec;
  for (auto& [b, s] : factors) spec.factors.push_back({b, s});
  return spec;
}

// Calls visit(chain) for every N >= n_1 >= ... >= n_L >= 1.
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

Rational q_kernel_by_enumeration(const QKernelSpec& k, long N) {
  const size_t L = static_cast<size_t>(k.s.weight());
  Rational total;
  if (k.form == KernelForm::MeanInf) {
    for_each_chain(N, L, [&](const IndexChain& c) {
      long Q = q_of(k.s, c);
      Rational term(1, (Q + 1) * (Q + c[L - 1] + 1));
      for (size_t i = 0; i + 1 < L; ++i) term /= Rational(c[i]);
      total += term;
    });
  } else {
    for_each_chain(N, L + 1, [&](const IndexChain& c) {
      IndexChain head(c.begin(), c.end() - 1);
      long Q = q_of(k.s, head);
      long nl = c[L - 1], last = c[L];
      Rational term(binomial(nl, last), binomial(Q + nl, last));
      term *= pow(k.a, last);
      term /= Rational(Q + nl + 1);
      for (size_t i = 0; i < L; ++i) term /= Rational(c[i]);
      total += term;
    });
  }
  return total;
}

}  // namespace

TEST(NaiveChainSum, Examples) {
  EXPECT_EQ(naive_chain_sum<Rational>(spec_of({{1, 1}}), 3), Rational(11, 6));
  EXPECT_EQ(naive_chain_sum<Rational>(spec_of({{1, 2}, {1, 1}}), 2), Rational(11, 8));
  EXPECT_EQ(naive_chain_sum<Rational>(spec_of({{2, 1}, {0, 3}}), 7), Rational(0));
  EXPECT_THROW(naive_chain_sum<Rational>(spec_of({{1, 1}, {1, 1}, {1, 1}, {1, 1}, {1, 1}}), 100), Error);
}

TEST(NaiveChainSum, TailTerm) {
  FactorSpec spec = spec_of({{1, 1}});
  spec.tail = TailTerm{Rational(2), Rational(1)};
  // sum_{n<=3} (2^n - 1)/n = 1 + 3/2 + 7/3
  EXPECT_EQ(naive_chain_sum<Rational>(spec, 3), Rational(29, 6));
  EXPECT_EQ(dp_chain_sum<Rational>(spec, 3), Rational(29, 6));
}

TEST(DpChainSum, MatchesNaiveOnRandomSpecs) {
  std::mt19937_64 rng(20240517);
  std::uniform_int_distribution<int> length(1, 5), n_dist(1, 25), power(0, 3), num(-24, 24),
      den(1, 12), coin(0, 3);
  for (int t = 0; t < 200; ++t) {
    FactorSpec spec;
    int L = length(rng);
    for (int i = 0; i < L; ++i) {
      spec.factors.push_back({Rational(BigInt(num(rng)), BigInt(den(rng))) / Rational(1) , power(rng)});
      Rational& b = spec.factors.back().base;
      if (abs(b) > Rational(2)) b = b / Rational(12);
    }
    if (coin(rng) == 0) {
      spec.tail = TailTerm{Rational(BigInt(num(rng)), BigInt(12)), Rational(BigInt(num(rng)), BigInt(12))};
    }
    long N = n_dist(rng);
    EXPECT_EQ(dp_chain_sum<Rational>(spec, N), naive_chain_sum<Rational>(spec, N)) << "trial " << t;
  }
}

TEST(DpChainSum, FloatModeAgreesWithExact) {
  FactorSpec spec = spec_of({{Rational(1, 3), 1}, {Rational(3), 2}, {Rational(1, 2), 0}, {Rational(-2), 1}});
  for (long N : {1L, 5L, 17L}) {
    BigReal exact(dp_chain_sum<Rational>(spec, N), kPrec);
    EXPECT_LE(abs(dp_chain_sum<BigReal>(spec, N) - exact).to_double(), 1e-35);
    EXPECT_LE(abs(naive_chain_sum<BigReal>(spec, N) - exact).to_double(), 1e-35);
  }
}

TEST(DpChainSum, PairingDampsInteriorGrowth) {
  FactorSpec spec = spec_of({{Rational(1, 2), 1}, {Rational(2), 1}});
  auto plan = plan_pairing(spec);
  ASSERT_TRUE(plan);
  EXPECT_TRUE(plan->paired);
  EXPECT_EQ(plan->beta, (std::vector<Rational>{1, 1}));
  EXPECT_EQ(plan->sigma, (std::vector<Rational>{1, Rational(1, 2)}));
  BigReal exact(dp_chain_sum<Rational>(spec, 25), kPrec);
  EXPECT_LE(abs(dp_chain_sum<BigReal>(spec, 25) - exact).to_double(), 1e-35);
  BigReal v = dp_chain_sum<BigReal>(spec, 200);
  EXPECT_TRUE(v.is_finite());
  EXPECT_GT(v, exact);
  EXPECT_LT(v, BigReal(4, kPrec));
}

TEST(DpChainSum, UnpairableSpecsRaiseRescale) {
  FactorSpec spec = spec_of({{Rational(3), 1}, {Rational(1, 2), 1}});
  EXPECT_FALSE(plan_pairing(spec));
  EXPECT_THROW(dp_chain_sum<BigReal>(spec, 400), Error);
  try {
    dp_chain_sum<BigReal>(spec, 400);
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::RescaleRequired);
  }
  // Exact mode has no magnitude limit.
  EXPECT_NO_THROW(dp_chain_sum<Rational>(spec, 60));
}

TEST(DpChainSum, PairingOnShapeArguments) {
  // (1-p, 1/(1-p), 1-p, 1 + a p/(1-p)) at p = 1/2, a = 1 must pair fully.
  FactorSpec spec = spec_of({{Rational(1, 2), 1}, {Rational(2), 1}, {Rational(1, 2), 1}, {Rational(1), 1}});
  spec.tail = TailTerm{Rational(2), Rational(1)};
  auto plan = plan_pairing(spec);
  ASSERT_TRUE(plan);
  EXPECT_TRUE(plan->paired);
  for (long N : {3L, 11L, 20L}) {
    BigReal exact(naive_chain_sum<Rational>(spec, N), kPrec);
    EXPECT_LE(abs(dp_chain_sum<BigReal>(spec, N) - exact).to_double(), 1e-35);
  }
}

TEST(DpChainSum, BaselZetaTruncation) {
  BigReal v = dp_chain_sum<BigReal>(spec_of({{1, 2}}), 10000);
  EXPECT_LE(abs(v - zeta2()).to_double(), 1.1e-4);
  EXPECT_LT(v, zeta2());
}

TEST(DpChainSum, MonotoneForNonnegativeSummands) {
  FactorSpec spec = spec_of({{1, 2}, {Rational(1, 2), 1}, {1, 1}});
  ChainSumStream<BigReal> stream(spec);
  BigReal last(kPrec);
  for (int i = 0; i < 300; ++i) {
    stream.advance();
    EXPECT_GE(stream.value(), last);
    last = stream.value();
  }
}

TEST(QCoupled, Examples) {
  EXPECT_EQ(dp_q_coupled<Rational>({Composition({1}), KernelForm::MeanFull, Rational(1)}, 3), Rational(13, 12));
  // Chains (1,1): 1/2, (2,1): Q=1 gives 1/(2*3*2), (2,2): 1/(1*3*2).
  EXPECT_EQ(dp_q_coupled<Rational>({Composition({2}), KernelForm::MeanInf, Rational(1)}, 2), Rational(3, 4));
  EXPECT_EQ(dp_q_coupled<Rational>({Composition({2, 1}), KernelForm::MeanFull, Rational(0)}, 5), Rational(0));
}

TEST(QCoupled, MatchesEnumeration) {
  for (const auto& parts : std::vector<std::vector<int>>{{2}, {2, 2}, {3, 2}, {1, 1}}) {
    for (KernelForm form : {KernelForm::MeanInf, KernelForm::MeanFull}) {
      for (Rational a : {Rational(1), Rational(1, 2), Rational(-1), Rational(2)}) {
        if (form == KernelForm::MeanInf && a != Rational(1)) continue;
        QKernelSpec k{Composition(parts), form, a};
        auto all = dp_q_coupled_all<Rational>(k, 20);
        for (long N : {1L, 2L, 3L, 7L, 12L, 20L}) {
          if (N > 12 && Composition(parts).weight() > 3 && form == KernelForm::MeanFull) continue;
          EXPECT_EQ(all[static_cast<size_t>(N)], q_kernel_by_enumeration(k, N))
              << Composition(parts).to_string() << " N=" << N;
        }
      }
    }
  }
}

TEST(QCoupled, FloatMatchesExact) {
  for (Rational a : {Rational(1, 2), Rational(-1), Rational(1)}) {
    QKernelSpec k{Composition({2, 1}), KernelForm::MeanFull, a};
    BigReal exact(dp_q_coupled<Rational>(k, 30), kPrec);
    EXPECT_LE(abs(dp_q_coupled<BigReal>(k, 30) - exact).to_double(), 1e-35);
  }
}

TEST(QCoupled, BudgetGuard) {
  EXPECT_THROW(dp_q_coupled<BigReal>({Composition({2, 2}), KernelForm::MeanInf, Rational(1)}, 6000), Error);
}

TEST(AdaptiveSum, Log2) {
  TruncationSchedule schedule;
  schedule.tolerance = 1e-10;
  EvalResult r = adaptive_sum(spec_of({{Rational(1, 2), 1}}), schedule);
  EXPECT_TRUE(r.converged);
  BigReal ln2 = log(BigReal(2, kPrec));
  EXPECT_LE(abs(r.value - ln2).to_double(), 1e-10);
  EXPECT_LE(r.error_estimate.to_double(), 1e-10);
}

TEST(AdaptiveSum, ZeroBases) {
  TruncationSchedule schedule;
  EvalResult r = adaptive_sum(spec_of({{0, 1}, {0, 2}}), schedule);
  EXPECT_TRUE(r.converged);
  EXPECT_TRUE(r.value.is_zero());
  EXPECT_EQ(r.truncation_level, schedule.initial);
}

TEST(AdaptiveSum, PolynomialTailExtrapolated) {
  TruncationSchedule schedule;
  schedule.tolerance = 1e-10;
  EvalResult r = adaptive_sum(spec_of({{1, 2}}), schedule);
  EXPECT_TRUE(r.converged);
  EXPECT_LE(abs(r.value - zeta2()).to_double(), 1e-10);
}

TEST(AdaptiveSum, MeanInfBasel) {
  TruncationSchedule schedule;
  schedule.tolerance = 1e-6;
  schedule.model = TailModel{4, 2};
  EvalResult r = adaptive_sum(QKernelSpec{Composition({2}), KernelForm::MeanInf, Rational(1)}, schedule);
  EXPECT_TRUE(r.converged);
  EXPECT_LE(abs(r.value - zeta2()).to_double(), 1e-6);
}

TEST(AdaptiveSum, NotConvergedIsReported) {
  TruncationSchedule schedule;
  schedule.max_n = 256;
  schedule.tolerance = 1e-12;
  EvalResult r = adaptive_sum(spec_of({{1, 1}, {1, 2}}), schedule);  // diverges like ln N
  EXPECT_FALSE(r.converged);
}

TEST(AdaptiveSum, Deterministic) {
  TruncationSchedule schedule;
  FactorSpec spec = spec_of({{Rational(1, 2), 1}, {Rational(2), 1}, {Rational(1, 2), 2}});
  EvalResult a = adaptive_sum(spec, schedule);
  EvalResult b = adaptive_sum(spec, schedule);
  EXPECT_TRUE(a.value == b.value);
  EXPECT_TRUE(a.error_estimate == b.error_estimate);
  EXPECT_EQ(a.terms_used, b.terms_used);
}
