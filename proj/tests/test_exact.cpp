#include <functional>

#include <gtest/gtest.h>

#include "polystar/errors.hpp"
#include "polystar/exact.hpp"

using namespace polystar;

namespace {

// Direct enumeration of zeta*_k(s; a) over all chains.
Rational mhsv_by_enumeration(long k, const Composition& s, const Rational& a) {
  const size_t d = static_cast<size_t>(s.depth());
  Rational sum;
  std::vector<long> chain(d);
  std::function<void(size_t, long)> rec = [&](size_t i, long upper) {
    if (i == d) {
      Rational term = pow(a, chain[d - 1]);
      for (size_t j = 0; j < d; ++j) term /= pow(Rational(chain[j]), s[j]);
      sum += term;
      return;
    }
    for (long v = 1; v <= upper; ++v) {
      chain[i] = v;
      rec(i + 1, v);
    }
  };
  rec(0, k);
  return sum;
}

std::vector<Composition> compositions_up_to(int weight) {
  std::vector<Composition> out;
  std::function<void(std::vector<int>&, int)> rec = [&](std::vector<int>& parts, int remaining) {
    if (!parts.empty()) out.emplace_back(parts);
    for (int p = 1; p <= remaining; ++p) {
      parts.push_back(p);
      rec(parts, remaining - p);
      parts.pop_back();
    }
  };
  std::vector<int> parts;
  rec(parts, weight);
  return out;
}

}  // namespace

TEST(GenHarmonic, Examples) {
  EXPECT_EQ(gen_harmonic(3, 2, 1), Rational(49, 36));
  EXPECT_EQ(gen_harmonic(2, 1, -1), Rational(-1, 2));
  EXPECT_EQ(gen_harmonic(0, 5, 7), Rational(0));
}

TEST(Mhsv, Examples) {
  EXPECT_EQ(mhsv(2, Composition({2, 1}), 1), Rational(11, 8));
  EXPECT_EQ(mhsv(6, Composition({3, 1, 2}), 0), Rational(0));
  EXPECT_EQ(mhsv(1, Composition({4, 2, 3}), Rational(-5, 7)), Rational(-5, 7));
  EXPECT_EQ(mhsv(0, Composition({2}), 3), Rational(0));
}

TEST(Mhsv, MatchesEnumeration) {
  for (const auto& s : compositions_up_to(4)) {
    for (Rational a : {Rational(1), Rational(-1, 2), Rational(2)}) {
      auto prefix = mhsv_prefix(12, s, a);
      for (long k : {1L, 2L, 5L, 12L}) {
        EXPECT_EQ(prefix[static_cast<size_t>(k)], mhsv_by_enumeration(k, s, a)) << s.to_string();
      }
    }
  }
}

TEST(Mhsv, MonotoneInK) {
  for (const auto& s : compositions_up_to(4)) {
    auto z = mhsv_prefix(21, s, 1);
    for (size_t k = 0; k + 1 < z.size(); ++k) EXPECT_LE(z[k], z[k + 1]);
  }
}

TEST(Mneimneh, Examples) {
  const Rational a(3, 7), p(2, 5);
  EXPECT_EQ(mneimneh_lhs({1, Composition({1}), a, p}), a * p);
  EXPECT_EQ(main_rhs({1, Composition({1}), a, p}), a * p);
  EXPECT_EQ(mneimneh_lhs({3, Composition({2}), 1, Rational(1, 2)}), Rational(73, 72));
  EXPECT_EQ(main_rhs({3, Composition({2}), 1, Rational(1, 2)}), Rational(73, 72));
  EXPECT_EQ(main_rhs_literal({3, Composition({2}), 1, Rational(1, 2)}), Rational(73, 72));
  EXPECT_EQ(mneimneh_lhs({4, Composition({2, 1}), a, 1}), mhsv(4, Composition({2, 1}), a));
  EXPECT_EQ(main_rhs({5, Composition({1, 3}), a, 0}), Rational(0));
}

TEST(Mneimneh, MainTransformSmallGrid) {
  for (const auto& s : compositions_up_to(3)) {
    for (long n : {1L, 4L, 7L}) {
      for (Rational a : {Rational(-1), Rational(1, 2), Rational(2)}) {
        for (Rational p : {Rational(-1), Rational(1, 3), Rational(2)}) {
          FiniteSumParams params{n, s, a, p};
          Rational lhs = mneimneh_lhs(params);
          EXPECT_EQ(lhs, main_rhs(params));
          EXPECT_EQ(lhs, main_rhs_literal(params));
        }
      }
    }
  }
}

TEST(Mneimneh, OriginalAndSingleOrder) {
  for (long n = 1; n <= 12; ++n) {
    for (Rational p : {Rational(0), Rational(1, 3), Rational(1), Rational(5, 2)}) {
      auto r = mneimneh_orig(n, p);
      EXPECT_EQ(r.lhs, r.rhs);
    }
    for (int s = 1; s <= 3; ++s) {
      auto r = gencev_d1(n, s, Rational(-2, 3), Rational(1, 4));
      EXPECT_EQ(r.lhs, r.rhs);
      EXPECT_EQ(r.lhs, mneimneh_lhs({n, Composition({s}), Rational(-2, 3), Rational(1, 4)}));
    }
  }
  EXPECT_THROW(gencev_d1(3, 2, 1, 1), Error);
}

TEST(Mneimneh, OnesComposition) {
  for (int d = 1; d <= 4; ++d) {
    for (long n = 1; n <= 10; ++n) {
      auto r = mn1(n, d, Rational(3, 2), Rational(-1, 3));
      EXPECT_EQ(r.lhs, r.rhs);
    }
  }
}

TEST(Mneimneh, DegenerateP) {
  for (const auto& s : compositions_up_to(4)) {
    for (long n : {1L, 3L, 8L}) {
      for (Rational a : {Rational(-1), Rational(1, 2), Rational(2)}) {
        auto zero = p_degenerate({n, s, a, 0});
        EXPECT_EQ(zero.lhs, zero.rhs);
        auto one = p_degenerate({n, s, a, 1});
        EXPECT_EQ(one.lhs, one.rhs);
      }
    }
  }
}

TEST(Mneimneh, ExampleFirstDisplayed) {
  for (long n = 1; n <= 8; ++n) {
    auto r = example_first(n);
    EXPECT_EQ(r.lhs, r.rhs) << n;
    // The displayed left side is -2^n M_n^{(3,2)}(-1, 1/2).
    EXPECT_EQ(r.lhs, -pow(Rational(2), n) * mneimneh_lhs({n, Composition({3, 2}), -1, Rational(1, 2)}));
  }
}

TEST(Dilcher, Examples) {
  auto r = dilcher_plus(3, 2, 2);
  EXPECT_EQ(r.lhs, Rational(-2, 9));
  EXPECT_EQ(r.rhs, Rational(-2, 9));
  EXPECT_EQ(dilcher_plus(4, 1, 2).rhs, Rational(0));
  auto z = dilcher_plus(6, 3, 0);
  EXPECT_EQ(z.lhs, Rational(0));
  EXPECT_EQ(z.rhs, Rational(0));

  auto o = odd_binom_sum(3, 1);
  EXPECT_EQ(o.lhs, Rational(10, 3));
  EXPECT_EQ(o.rhs, Rational(10, 3));
  EXPECT_EQ(odd_binom_sum(1, 4).lhs, Rational(1));
  EXPECT_EQ(odd_binom_sum(1, 4).rhs, Rational(1));
  EXPECT_EQ(odd_binom_sum(2, 1).rhs, Rational(2));

  EXPECT_EQ(dilcher_classic(2, 1).lhs, Rational(3, 2));
  EXPECT_EQ(dilcher_classic(2, 1).rhs, Rational(3, 2));
  EXPECT_EQ(dilcher_classic(3, 2).lhs, Rational(85, 36));
  EXPECT_EQ(dilcher_classic(3, 2).rhs, Rational(85, 36));
}

TEST(Dilcher, SmallGrid) {
  for (long n = 1; n <= 12; ++n) {
    for (int d = 1; d <= 3; ++d) {
      for (Rational a : {Rational(-2), Rational(1, 2), Rational(3)}) {
        auto r = dilcher_plus(n, d, a);
        EXPECT_EQ(r.lhs, r.rhs);
      }
      auto a2 = dilcher_a2(n, d);
      EXPECT_EQ(a2.lhs, a2.rhs);
      EXPECT_EQ(a2.rhs.is_zero(), n % 2 == 0);
    }
  }
}

TEST(Mean, Examples) {
  EXPECT_EQ(mean_lhs(3, Composition({1}), 1), Rational(13, 12));
  EXPECT_EQ(mean_lhs(5, Composition({2, 1}), 0), Rational(0));
  EXPECT_EQ(mean_lhs(1, Composition({2, 1}), 1), Rational(1, 2));
  EXPECT_EQ(mean_rhs(3, Composition({1}), 1), Rational(13, 12));
  EXPECT_EQ(mean_rhs(4, Composition({3}), 0), Rational(0));
  EXPECT_EQ(mean_rhs(2, Composition({2}), 1), Rational(3, 4));
  EXPECT_EQ(mean_example1_rhs(3, 1), Rational(13, 12));
  EXPECT_EQ(mean_example1_rhs(1, 3), Rational(1, 2));
  EXPECT_EQ(mean_example1_rhs(2, 2), Rational(11, 12));
  auto hk = mean_sum_hk(3);
  EXPECT_EQ(hk.lhs, Rational(13, 3));
  EXPECT_EQ(hk.rhs, Rational(13, 3));
}

TEST(Mean, IdentitySmallGrid) {
  for (const auto& s : compositions_up_to(3)) {
    for (long n : {1L, 5L, 9L}) {
      for (Rational a : {Rational(-1), Rational(1, 2), Rational(2)}) {
        EXPECT_EQ(mean_lhs(n, s, a), mean_rhs(n, s, a)) << s.to_string() << " n=" << n;
      }
    }
  }
  for (int d = 1; d <= 4; ++d) {
    for (long n = 1; n <= 12; ++n) EXPECT_EQ(mean_example1_rhs(n, d), mean_lhs(n, Composition::ones(d), 1));
  }
}

TEST(PanXu, Examples) {
  auto base = pan_xu_check(1, {1}, {}, 1, 0);
  EXPECT_EQ(base.lhs, Rational(1));
  EXPECT_EQ(base.rhs, Rational(1));
  auto r = pan_xu_check(2, {0, 0}, {0}, 1, 1);
  EXPECT_EQ(r.lhs, Rational(13, 4));
  EXPECT_EQ(r.rhs, Rational(13, 4));
  EXPECT_EQ(pan_xu_composition({1, 0, 2}, {0, 1}), Composition({1, 2, 3, 1, 1}));
  EXPECT_THROW(pan_xu_check(2, {1}, {}, 1, -1), Error);
  // r = 0, u = (1): Mneimneh's identity scaled by (x+y)^n.
  for (long n = 1; n <= 6; ++n) {
    auto m = pan_xu_check(n, {1}, {}, Rational(2), Rational(3));
    auto orig = mneimneh_orig(n, Rational(2, 5));
    EXPECT_EQ(m.lhs, pow(Rational(5), n) * orig.lhs);
    EXPECT_EQ(m.lhs, m.rhs);
  }
}

TEST(Aux, Examples) {
  EXPECT_EQ(aux_rhs(AuxVariant::Aux1, 3, 1, 1), Rational(29, 6));
  EXPECT_EQ(aux_rhs(AuxVariant::Aux1, 4, 0, Rational(7, 3)), Rational(0));
  EXPECT_EQ(aux_rhs(AuxVariant::Aux2, 5, 1, Rational(-1, 2)), aux_rhs(AuxVariant::Aux1, 5, 1, Rational(-1, 2)));
}

TEST(Aux, QuadratureAgrees) {
  for (long n = 1; n <= 6; ++n) {
    for (Rational a : {Rational(1, 2), Rational(1), Rational(3, 2)}) {
      for (Rational x : {Rational(-1, 2), Rational(1, 2), Rational(1)}) {
        for (AuxVariant v : {AuxVariant::Aux1, AuxVariant::Aux2}) {
          auto q = aux_integral(v, n, a, x, 1e-12);
          BigReal exact(aux_rhs(v, n, a, x), kDefaultPrecision);
          EXPECT_LE(abs(q.value - exact).to_double(), 1e-12);
        }
      }
    }
  }
}
