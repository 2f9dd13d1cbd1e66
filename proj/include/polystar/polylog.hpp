#pragma once

#include <utility>
#include <variant>
#include <vector>

#include "polystar/bigreal.hpp"
#include "polystar/chain_sum.hpp"
#include "polystar/compositions.hpp"
#include "polystar/numeric.hpp"
#include "polystar/rational.hpp"

namespace polystar {

// zeta(s), s >= 2, by Euler-Maclaurin; error_estimate bounds the remainder.
EvalResult zeta(int s, Precision prec = kDefaultPrecision);

// Li_s(x) for |x| <= 1 (x != 1 when s = 1).
EvalResult li(int s, const Rational& x, double tol, Precision prec = kDefaultPrecision);

struct PolylogQuery {
  Composition s;
  std::vector<Rational> xs;
  double tol = 1e-10;
};

// Li*_s(x_1, ..., x_d). Throws PairingUnavailable when a modulus > 1 cannot be compensated
// and Domain for an obviously divergent head (x_1 = 1 with s_1 = 1).
EvalResult li_star(const PolylogQuery& q, Precision prec = kDefaultPrecision);

// Li*_s(prefix, alpha) - Li*_s(prefix, gamma) as one chain sum.
EvalResult li_star_difference(const Composition& s, const std::vector<Rational>& prefix,
                              const Rational& alpha, const Rational& gamma, double tol,
                              Precision prec = kDefaultPrecision);

// zeta*(s), s_1 >= 2.
EvalResult zeta_star(const Composition& s, double tol, Precision prec = kDefaultPrecision);

enum class ClosedForm {
  TwoD,     // zeta*({2}_d) = (2 - 4^{1-d}) zeta(2d)
  TwoDOne,  // zeta*({2}_d, 1) = 2 zeta(2d+1)
};

BigReal zeta_star_closed(ClosedForm form, int d, Precision prec = kDefaultPrecision);

enum class PolylogIdentity {
  Li1Main,
  Li1A1,
  Li1Red1,
  Li1Red2,
  Li2Main,
  Li2A1,
  Li2Red1,
  Li2Red2,
  IntroSeries,
  IntroRedL,
  IntroRedR,
  MeanInfA,
  MeanInf1,
};

// Shape for the LI identities, a composition for the mean identities, an integer weight for
// the INTRO identities.
using PolylogShape = std::variant<ShapeBlocks, Composition, int>;

struct SideResults {
  EvalResult lhs;
  EvalResult rhs;
};

// True iff the identity's validity region contains the point.
bool polylog_identity_in_domain(PolylogIdentity id, const PolylogShape& shape, const Rational& a,
                                const Rational& p);

// Both sides, each evaluated to tol. Throws Domain outside the validity region unless
// check_domain is false, in which case both sides are evaluated as far as they converge.
SideResults li_identity_sides(PolylogIdentity id, const PolylogShape& shape, const Rational& a,
                              const Rational& p, double tol, Precision prec = kDefaultPrecision,
                              bool check_domain = true);

TruncationSchedule series_schedule(double tol);
TruncationSchedule kernel_schedule(double tol);

}  // namespace polystar
