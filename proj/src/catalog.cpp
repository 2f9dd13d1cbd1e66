#include "polystar/catalog.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <mutex>
#include <thread>

#include "polystar/chain_sum.hpp"
#include "polystar/compositions.hpp"
#include "polystar/errors.hpp"
#include "polystar/exact.hpp"
#include "polystar/numeric.hpp"
#include "polystar/polylog.hpp"

namespace polystar {

namespace {

// ---- parameter access -------------------------------------------------------------------

const std::string& raw(const Params& params, const std::string& name) {
  auto it = params.find(name);
  if (it == params.end()) throw Error(ErrorCode::Schema, "missing parameter '" + name + "'");
  return it->second;
}

long get_int(const Params& params, const std::string& name) {
  const std::string& text = raw(params, name);
  size_t used = 0;
  long value = 0;
  try {
    value = std::stol(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size())
    throw Error(ErrorCode::Schema, "parameter '" + name + "' must be an integer");
  return value;
}

Rational get_rat(const Params& params, const std::string& name) {
  return Rational::parse(raw(params, name));
}

Composition get_comp(const Params& params, const std::string& name) {
  try {
    return Composition::parse(raw(params, name));
  } catch (const Error& e) {
    throw Error(ErrorCode::Schema, e.what());
  }
}

ShapeBlocks get_shape(const Params& params, const std::string& name) {
  return ShapeBlocks::parse(raw(params, name));
}

std::string join(const std::vector<int>& values) {
  std::string out;
  for (size_t i = 0; i < values.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(values[i]);
  }
  return out;
}

std::vector<int> get_list(const Params& params, const std::string& name) {
  const std::string& text = raw(params, name);
  std::vector<int> out;
  size_t start = 0;
  while (start < text.size()) {
    size_t end = text.find(',', start);
    if (end == std::string::npos) end = text.size();
    const std::string item = text.substr(start, end - start);
    size_t used = 0;
    int value = 0;
    try {
      value = std::stoi(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size() || value < 0)
      throw Error(ErrorCode::Schema, "parameter '" + name + "' must be a list of naturals");
    out.push_back(value);
    start = end + 1;
  }
  return out;
}

std::string canonical(const ParamSpec& spec, const Params& params) {
  switch (spec.kind) {
    case ParamKind::Integer:
      return std::to_string(get_int(params, spec.name));
    case ParamKind::Rational:
      return get_rat(params, spec.name).to_string();
    case ParamKind::Composition:
      return get_comp(params, spec.name).to_string();
    case ParamKind::ShapeA:
    case ParamKind::ShapeB: {
      const ShapeBlocks shape = get_shape(params, spec.name);
      const Family want = spec.kind == ParamKind::ShapeA ? Family::A : Family::B;
      if (shape.family != want)
        throw Error(ErrorCode::Schema, "parameter '" + spec.name + "' has the wrong shape family");
      return shape.to_string();
    }
    case ParamKind::IntList:
      return join(get_list(params, spec.name));
  }
  return {};
}

// ---- side construction --------------------------------------------------------------------

SideValues exact_sides(const Rational& lhs, const Rational& rhs, Precision prec) {
  return SideValues{lhs, rhs, BigReal(prec), BigReal(prec), 0, 0, true};
}

SideValues exact_sides(const SidePair& pair, Precision prec) {
  return exact_sides(pair.lhs, pair.rhs, prec);
}

SideValues numeric_sides(const EvalResult& lhs, const EvalResult& rhs) {
  return SideValues{lhs.value,      rhs.value,      lhs.error_estimate, rhs.error_estimate,
                    lhs.terms_used, rhs.terms_used, lhs.converged && rhs.converged};
}

SideValues closed_vs(const BigReal& closed, const EvalResult& series, bool closed_on_left) {
  EvalResult exact{closed, BigReal(closed.precision()), 0, 0, true};
  return closed_on_left ? numeric_sides(exact, series) : numeric_sides(series, exact);
}

FiniteSumParams finite_params(const Params& p) {
  return FiniteSumParams{get_int(p, "n"), get_comp(p, "s"), get_rat(p, "a"), get_rat(p, "p")};
}

// ---- grids --------------------------------------------------------------------------------

std::vector<Composition> compositions_up_to(int max_weight) {
  std::vector<Composition> out;
  for (int w = 1; w <= max_weight; ++w) {
    for (unsigned mask = 0; mask < (1u << (w - 1)); ++mask) {
      std::vector<int> parts;
      int run = 1;
      for (int i = 0; i < w - 1; ++i) {
        if (mask & (1u << i)) {
          parts.push_back(run);
          run = 1;
        } else {
          ++run;
        }
      }
      parts.push_back(run);
      out.emplace_back(std::move(parts));
    }
  }
  return out;
}

// All vectors of the given length with entries in [lo, hi].
std::vector<std::vector<int>> boxes(size_t length, int lo, int hi) {
  std::vector<std::vector<int>> out{{}};
  for (size_t i = 0; i < length; ++i) {
    std::vector<std::vector<int>> next;
    for (const auto& prefix : out) {
      for (int v = lo; v <= hi; ++v) {
        auto extended = prefix;
        extended.push_back(v);
        next.push_back(std::move(extended));
      }
    }
    out = std::move(next);
  }
  return out;
}

std::vector<ShapeBlocks> shapes(Family family, int max_d, int entry_max) {
  std::vector<ShapeBlocks> out;
  for (int d = 1; d <= max_d; ++d) {
    for (const auto& m : boxes(static_cast<size_t>(d), 0, entry_max)) {
      const size_t u_len = family == Family::A ? static_cast<size_t>(d - 1) : static_cast<size_t>(d);
      for (const auto& u : boxes(u_len, 0, entry_max)) {
        if (family == Family::B && u.back() < 1) continue;
        out.push_back(ShapeBlocks{family, m, u});
      }
    }
  }
  return out;
}

std::vector<std::string> texts(std::initializer_list<const char*> values) {
  return std::vector<std::string>(values.begin(), values.end());
}

std::vector<std::string> int_range(long lo, long hi) {
  std::vector<std::string> out;
  for (long v = lo; v <= hi; ++v) out.push_back(std::to_string(v));
  return out;
}

std::vector<std::string> comp_texts(int max_weight) {
  std::vector<std::string> out;
  for (const auto& c : compositions_up_to(max_weight)) out.push_back(c.to_string());
  return out;
}

std::vector<std::string> shape_texts(Family family) {
  std::vector<std::string> out;
  for (const auto& s : shapes(family, 2, 2)) out.push_back(s.to_string());
  return out;
}

// Cartesian product of named value lists.
std::vector<Params> product(const std::vector<std::pair<std::string, std::vector<std::string>>>& axes) {
  std::vector<Params> out{{}};
  for (const auto& [name, values] : axes) {
    std::vector<Params> next;
    for (const auto& base : out) {
      for (const auto& v : values) {
        Params p = base;
        p[name] = v;
        next.push_back(std::move(p));
      }
    }
    out = std::move(next);
  }
  return out;
}

// Paired (a, p) points.
std::vector<Params> with_ap(const std::vector<Params>& base,
                            std::initializer_list<std::pair<const char*, const char*>> points) {
  std::vector<Params> out;
  for (const auto& b : base) {
    for (const auto& [a, p] : points) {
      Params q = b;
      q["a"] = a;
      q["p"] = p;
      out.push_back(std::move(q));
    }
  }
  return out;
}

const std::vector<std::string> kExactA = texts({"-1", "-1/2", "1/2", "1", "2"});
const std::vector<std::string> kExactP = texts({"-1", "1/3", "1/2", "3/4", "2"});

// ---- sampling -----------------------------------------------------------------------------

long uniform_int(std::mt19937_64& rng, long lo, long hi) {
  return std::uniform_int_distribution<long>(lo, hi)(rng);
}

Rational sample_rational(std::mt19937_64& rng, const Rational& lo, const Rational& hi) {
  for (;;) {
    const long den = uniform_int(rng, 1, 12);
    const Rational lo_scaled = lo * Rational(den);
    const Rational hi_scaled = hi * Rational(den);
    mpz_class lo_num, hi_num;
    mpz_cdiv_q(lo_num.get_mpz_t(), lo_scaled.get().get_num_mpz_t(), lo_scaled.get().get_den_mpz_t());
    mpz_fdiv_q(hi_num.get_mpz_t(), hi_scaled.get().get_num_mpz_t(), hi_scaled.get().get_den_mpz_t());
    if (lo_num > hi_num) continue;
    const long num = uniform_int(rng, lo_num.get_si(), hi_num.get_si());
    return Rational(num, den);
  }
}

Composition sample_composition(std::mt19937_64& rng, long lo, long hi) {
  const long w = uniform_int(rng, lo, hi);
  std::vector<int> parts;
  int run = 1;
  for (long i = 0; i + 1 < w; ++i) {
    if (uniform_int(rng, 0, 1)) {
      parts.push_back(run);
      run = 1;
    } else {
      ++run;
    }
  }
  parts.push_back(run);
  return Composition(std::move(parts));
}

ShapeBlocks sample_shape(std::mt19937_64& rng, Family family, long lo, long hi, int entry_max) {
  const int d = static_cast<int>(uniform_int(rng, lo, hi));
  ShapeBlocks shape{family, {}, {}};
  for (int i = 0; i < d; ++i) shape.m.push_back(static_cast<int>(uniform_int(rng, 0, entry_max)));
  const int u_len = family == Family::A ? d - 1 : d;
  for (int i = 0; i < u_len; ++i) {
    const long min_u = (family == Family::B && i == u_len - 1) ? 1 : 0;
    shape.u.push_back(static_cast<int>(uniform_int(rng, min_u, std::max<long>(min_u, entry_max))));
  }
  return shape;
}

Params sample_generic(const IdentityDescriptor& desc, std::mt19937_64& rng, bool outside) {
  Params out;
  for (const ParamSpec& spec : desc.params) {
    switch (spec.kind) {
      case ParamKind::Integer:
        out[spec.name] = std::to_string(
            uniform_int(rng, spec.lo.numerator().get_si(), spec.hi.numerator().get_si()));
        break;
      case ParamKind::Rational: {
        Rational lo = spec.lo, hi = spec.hi;
        if (outside) {
          const Rational width = hi - lo + Rational(1);
          lo -= width;
          hi += width;
        }
        out[spec.name] = sample_rational(rng, lo, hi).to_string();
        break;
      }
      case ParamKind::Composition:
        out[spec.name] = sample_composition(rng, spec.lo.numerator().get_si(),
                                            spec.hi.numerator().get_si())
                             .to_string();
        break;
      case ParamKind::ShapeA:
      case ParamKind::ShapeB:
        out[spec.name] = sample_shape(rng, spec.kind == ParamKind::ShapeA ? Family::A : Family::B,
                                      spec.lo.numerator().get_si(), spec.hi.numerator().get_si(),
                                      spec.entry_max)
                             .to_string();
        break;
      case ParamKind::IntList:
        throw Error(ErrorCode::Schema, "list parameters need a custom sampler");
    }
  }
  return out;
}

// ---- descriptor helpers -------------------------------------------------------------------

ParamSpec int_param(const char* name, long lo, long hi) {
  return ParamSpec{name, ParamKind::Integer, Rational(lo), Rational(hi), 0, std::nullopt};
}

ParamSpec rat_param(const char* name, Rational lo, Rational hi) {
  return ParamSpec{name, ParamKind::Rational, lo, hi, 0, std::nullopt};
}

ParamSpec comp_param(const char* name, long lo_weight, long hi_weight) {
  return ParamSpec{name, ParamKind::Composition, Rational(lo_weight), Rational(hi_weight), 0,
                   std::nullopt};
}

ParamSpec shape_param(Family family) {
  return ParamSpec{"shape", family == Family::A ? ParamKind::ShapeA : ParamKind::ShapeB,
                   Rational(1), Rational(2), 2, std::nullopt};
}

ParamSpec list_param(const char* name) {
  return ParamSpec{name, ParamKind::IntList, Rational(0), Rational(2), 2, std::nullopt};
}

std::function<bool(const Params&)> always() {
  return [](const Params&) { return true; };
}

std::function<bool(const Params&)> constraint_ap(Constraint c) {
  return [c](const Params& p) { return domain_check(c, get_rat(p, "a"), get_rat(p, "p")); };
}

// Numeric p ranges stay inside [3/10, 4/5], away from the slow boundary.
const Rational kPLo(3, 10);
const Rational kPHi(4, 5);

constexpr double kSeriesTol = 1e-8;
constexpr double kKernelTol = 1e-6;
constexpr double kQuadTol = 1e-10;

PolylogShape shape_or_weight(const Params& p, PolylogIdentity id) {
  switch (id) {
    case PolylogIdentity::IntroSeries:
    case PolylogIdentity::IntroRedL:
    case PolylogIdentity::IntroRedR:
      return static_cast<int>(get_int(p, "s"));
    case PolylogIdentity::MeanInfA:
    case PolylogIdentity::MeanInf1:
      return get_comp(p, "s");
    default:
      return get_shape(p, "shape");
  }
}

// a is fixed by the identity when it is not a parameter.
Rational effective_a(const Params& p, PolylogIdentity id) {
  switch (id) {
    case PolylogIdentity::Li1A1:
    case PolylogIdentity::Li2A1:
    case PolylogIdentity::MeanInf1:
      return Rational(1);
    case PolylogIdentity::Li1Red1:
    case PolylogIdentity::Li2Red1:
      return Rational(1) - inverse(get_rat(p, "p"));
    case PolylogIdentity::IntroRedL:
      return Rational(0);
    default:
      return get_rat(p, "a");
  }
}

Rational effective_p(const Params& p, PolylogIdentity id) {
  if (id == PolylogIdentity::MeanInfA || id == PolylogIdentity::MeanInf1) return Rational(1, 2);
  return get_rat(p, "p");
}

IdentityDescriptor polylog_descriptor(std::string id, std::string anchor, PolylogIdentity which,
                                      std::vector<ParamSpec> params, std::string constraint,
                                      std::string lhs, std::string rhs, double tol,
                                      std::function<std::vector<Params>()> grid) {
  IdentityDescriptor d;
  d.id = std::move(id);
  d.anchor = std::move(anchor);
  d.mode = Mode::Numeric;
  d.params = std::move(params);
  d.constraint = std::move(constraint);
  d.lhs_binding = std::move(lhs);
  d.rhs_binding = std::move(rhs);
  d.default_tolerance = tol;
  d.in_domain = [which](const Params& p) {
    return polylog_identity_in_domain(which, shape_or_weight(p, which), effective_a(p, which),
                                      effective_p(p, which));
  };
  d.evaluate = [which](const Params& p, double side_tol, Precision prec) {
    const SideResults r = li_identity_sides(which, shape_or_weight(p, which), effective_a(p, which),
                                            effective_p(p, which), side_tol, prec, false);
    return numeric_sides(r.lhs, r.rhs);
  };
  d.grid = std::move(grid);
  return d;
}

IdentityDescriptor exact_descriptor(std::string id, std::string anchor,
                                    std::vector<ParamSpec> params, std::string constraint,
                                    std::string lhs, std::string rhs,
                                    std::function<bool(const Params&)> in_domain,
                                    std::function<SideValues(const Params&, Precision)> eval,
                                    std::function<std::vector<Params>()> grid) {
  IdentityDescriptor d;
  d.id = std::move(id);
  d.anchor = std::move(anchor);
  d.mode = Mode::Exact;
  d.params = std::move(params);
  d.constraint = std::move(constraint);
  d.lhs_binding = std::move(lhs);
  d.rhs_binding = std::move(rhs);
  d.in_domain = std::move(in_domain);
  d.evaluate = [eval = std::move(eval)](const Params& p, double, Precision prec) {
    return eval(p, prec);
  };
  d.grid = std::move(grid);
  return d;
}

// Li*_{ {1}_|s| } at args_main minus args_sub for a = 1, the depth-|s| side of the a = 1 examples.
EvalResult a1_difference(const ShapeBlocks& shape, const Rational& p, double tol, Precision prec) {
  const std::vector<Rational> main = shape_args(shape, ArgVariant::Main, Rational(1), p);
  const std::vector<Rational> sub = shape_args(shape, ArgVariant::Sub, Rational(1), p);
  const std::vector<Rational> prefix(main.begin(), main.end() - 1);
  return li_star_difference(Composition::ones(static_cast<int>(main.size())), prefix, main.back(),
                            sub.back(), tol, prec);
}

std::vector<IdentityDescriptor> build_catalog() {
  std::vector<IdentityDescriptor> c;
  const Rational one(1);

  c.push_back(exact_descriptor(
      "MNEIMNEH_ORIG", "sum_k C(n,k) p^k (1-p)^(n-k) H_k = sum_{k<=n} (1 - (1-p)^k)/k",
      {int_param("n", 1, 30), rat_param("p", Rational(-2), Rational(2))}, "NONE",
      "binomial average of H_k", "sum of (1-(1-p)^k)/k", always(),
      [](const Params& p, Precision prec) {
        return exact_sides(mneimneh_orig(get_int(p, "n"), get_rat(p, "p")), prec);
      },
      [] { return product({{"n", int_range(1, 20)}, {"p", kExactP}}); }));

  c.push_back(exact_descriptor(
      "GENCEV_D1",
      "M_n^(s)(a,p) = sum_{n>=n_1>=...>=n_s>=1} (1-p)^(n_1) ((1+ap/(1-p))^(n_s) - 1)/(n_1...n_s)",
      {int_param("n", 1, 12), int_param("s", 1, 4), rat_param("a", Rational(-2), Rational(2)),
       rat_param("p", Rational(-1), Rational(2))},
      "P_NOT_ONE", "mneimneh_lhs with s = (s)", "s-fold chain sum",
      constraint_ap(Constraint::PNotOne),
      [](const Params& p, Precision prec) {
        return exact_sides(gencev_d1(get_int(p, "n"), static_cast<int>(get_int(p, "s")),
                                     get_rat(p, "a"), get_rat(p, "p")),
                           prec);
      },
      [] {
        return product({{"n", int_range(1, 10)},
                        {"s", int_range(1, 4)},
                        {"a", texts({"-1", "1/2", "1", "2"})},
                        {"p", kExactP}});
      }));

  c.push_back(exact_descriptor(
      "MAIN_TRANSFORM",
      "M_n^(s)(a,p) = sum over chains of length |s| of (1-p)^Q(s) [(1-p+ap)^(n_|s|) - "
      "(1-p)^(n_|s|)]/(n_1...n_|s|)",
      {int_param("n", 1, 10), comp_param("s", 1, 4), rat_param("a", Rational(-2), Rational(2)),
       rat_param("p", Rational(-1), Rational(2))},
      "NONE", "mneimneh_lhs", "main_rhs", always(),
      [](const Params& p, Precision prec) {
        const FiniteSumParams f = finite_params(p);
        return exact_sides(mneimneh_lhs(f), main_rhs(f), prec);
      },
      [] {
        return product(
            {{"n", int_range(1, 10)}, {"s", comp_texts(4)}, {"a", kExactA}, {"p", kExactP}});
      }));

  c.push_back(exact_descriptor(
      "EX_FIRST",
      "sum_k C(n,k) sum_{j<=k} (sum_{i<=j} (-1)^(i-1)/i^2)/j^3 = sum over 5-chains of "
      "2^(n-n_1+n_3-n_4)/(n_1...n_5)",
      {int_param("n", 1, 8)}, "NONE", "binomial sum of nested alternating sums",
      "5-chain sum", always(),
      [](const Params& p, Precision prec) { return exact_sides(example_first(get_int(p, "n")), prec); },
      [] { return product({{"n", int_range(1, 8)}}); }));

  c.push_back(exact_descriptor(
      "MN1",
      "M_n^({1}_d)(a,p) = sum over d-chains of [(1-p+ap)^(n_d) - (1-p)^(n_d)]/(n_1...n_d)",
      {int_param("n", 1, 10), int_param("d", 1, 4), rat_param("a", Rational(-2), Rational(2)),
       rat_param("p", Rational(-1), Rational(2))},
      "NONE", "mneimneh_lhs with s = {1}_d", "d-chain enumeration", always(),
      [](const Params& p, Precision prec) {
        return exact_sides(mn1(get_int(p, "n"), static_cast<int>(get_int(p, "d")), get_rat(p, "a"),
                               get_rat(p, "p")),
                           prec);
      },
      [] {
        return product({{"n", int_range(1, 8)},
                        {"d", int_range(1, 3)},
                        {"a", texts({"-1", "1/2", "2"})},
                        {"p", texts({"1/3", "1/2", "2"})}});
      }));

  c.push_back(exact_descriptor(
      "DILCHER_PLUS", "sum_k C(n,k) (-1)^k zeta*_k({1}_d; a) = ((1-a)^n - 1)/n^d",
      {int_param("n", 1, 20), int_param("d", 1, 4), rat_param("a", Rational(-3), Rational(3))},
      "NONE", "alternating binomial sum of zeta*_k({1}_d; a)", "((1-a)^n - 1)/n^d", always(),
      [](const Params& p, Precision prec) {
        return exact_sides(
            dilcher_plus(get_int(p, "n"), static_cast<int>(get_int(p, "d")), get_rat(p, "a")), prec);
      },
      [] {
        return product({{"n", int_range(1, 25)},
                        {"d", int_range(1, 5)},
                        {"a", texts({"-2", "-1", "0", "1/2", "1", "2", "3"})}});
      }));

  c.push_back(exact_descriptor(
      "DILCHER_A2", "sum_k C(n,k) (-1)^(k-1) zeta*_k({1}_d; 2) = 0 for even n, 2/n^d for odd n",
      {int_param("n", 1, 25), int_param("d", 1, 5)}, "NONE",
      "alternating binomial sum of zeta*_k({1}_d; 2)", "0 or 2/n^d", always(),
      [](const Params& p, Precision prec) {
        return exact_sides(dilcher_a2(get_int(p, "n"), static_cast<int>(get_int(p, "d"))), prec);
      },
      [] { return product({{"n", int_range(1, 25)}, {"d", int_range(1, 5)}}); }));

  c.push_back(exact_descriptor(
      "ODD_BINOM", "sum_{k<=(n+1)/2} C(n,2k-1)/(2k-1)^d = zeta*_n({1}_d; 2)/2",
      {int_param("n", 1, 25), int_param("d", 1, 5)}, "NONE", "odd binomial sum",
      "zeta*_n({1}_d; 2)/2", always(),
      [](const Params& p, Precision prec) {
        return exact_sides(odd_binom_sum(get_int(p, "n"), static_cast<int>(get_int(p, "d"))), prec);
      },
      [] { return product({{"n", int_range(1, 25)}, {"d", int_range(1, 5)}}); }));

  c.push_back(exact_descriptor(
      "DILCHER_CLASSIC", "sum_k C(n,k) (-1)^(k-1)/k^d = zeta*_n({1}_d)",
      {int_param("n", 1, 25), int_param("d", 1, 5)}, "NONE", "alternating binomial sum",
      "zeta*_n({1}_d)", always(),
      [](const Params& p, Precision prec) {
        return exact_sides(dilcher_classic(get_int(p, "n"), static_cast<int>(get_int(p, "d"))),
                           prec);
      },
      [] { return product({{"n", int_range(1, 25)}, {"d", int_range(1, 5)}}); }));

  {
    IdentityDescriptor d = exact_descriptor(
        "P_DEGENERATE",
        "chain side of the main transform equals 0 at p = 0 and zeta*_n(s; a) at p = 1",
        {int_param("n", 1, 10), comp_param("s", 1, 4), rat_param("a", Rational(-2), Rational(2)),
         rat_param("p", Rational(0), Rational(1))},
        "P_BOUNDARY", "main_rhs at p in {0, 1}", "0 or zeta*_n(s; a)",
        [](const Params& p) {
          const Rational pv = get_rat(p, "p");
          return pv.is_zero() || pv == Rational(1);
        },
        [](const Params& p, Precision prec) {
          return exact_sides(p_degenerate(finite_params(p)), prec);
        },
        [] {
          return product(
              {{"n", int_range(1, 10)}, {"s", comp_texts(4)}, {"a", kExactA}, {"p", texts({"0", "1"})}});
        });
    d.sampler = [](std::mt19937_64& rng, bool outside) {
      Params out;
      out["n"] = std::to_string(uniform_int(rng, 1, 10));
      out["s"] = sample_composition(rng, 1, 4).to_string();
      out["a"] = sample_rational(rng, Rational(-2), Rational(2)).to_string();
      out["p"] = outside ? sample_rational(rng, Rational(-2), Rational(2)).to_string()
                         : std::to_string(uniform_int(rng, 0, 1));
      return out;
    };
    c.push_back(std::move(d));
  }

  for (AuxVariant variant : {AuxVariant::Aux1, AuxVariant::Aux2}) {
    const bool first = variant == AuxVariant::Aux1;
    IdentityDescriptor d;
    d.id = first ? "AUX1" : "AUX2";
    d.anchor = first ? "integral_0^a ((1+Ax)^n - 1)/A dA = sum_{j<=n} ((1+ax)^j - 1)/j"
                     : "integral_{1-a}^1 ((1+Ax)^n - 1)/A dA = sum_{j<=n} ((1+x)^j - (1+x-ax)^j)/j";
    d.mode = Mode::Quadrature;
    d.params = {int_param("n", 1, 6), rat_param("a", Rational(1, 2), Rational(3, 2)),
                rat_param("x", Rational(-1), Rational(1))};
    d.constraint = "NONE";
    d.lhs_binding = "adaptive Gauss-Legendre quadrature";
    d.rhs_binding = "aux_rhs";
    d.default_tolerance = kQuadTol;
    d.in_domain = always();
    d.evaluate = [variant](const Params& p, double tol, Precision prec) {
      const long n = get_int(p, "n");
      const Rational a = get_rat(p, "a"), x = get_rat(p, "x");
      const QuadratureResult q = aux_integral(variant, n, a, x, tol, prec);
      return SideValues{q.value, aux_rhs(variant, n, a, x), q.error_estimate, BigReal(prec),
                        q.panels, 0, true};
    };
    d.grid = [] {
      return product({{"n", int_range(1, 6)},
                      {"a", texts({"1/2", "1", "3/2"})},
                      {"x", texts({"-1/2", "1/2", "1"})}});
    };
    c.push_back(std::move(d));
  }

  {
    IdentityDescriptor d = exact_descriptor(
        "PAN_XU",
        "sum_k C(n,k) x^k y^(n-k) zeta*_k(s) = (x+y)^n times the main chain side at a = 1, "
        "p = x/(x+y), s = ({1}_(u_1), m_1+2, ..., {1}_(u_(r+1)))",
        {int_param("n", 1, 8), list_param("u"), list_param("m"),
         rat_param("x", Rational(-2), Rational(2)), rat_param("y", Rational(-2), Rational(2))},
        "X_PLUS_Y_NONZERO", "binomial (x, y) sum of zeta*_k(s)", "(x+y)^n main_rhs",
        [](const Params& p) { return !(get_rat(p, "x") + get_rat(p, "y")).is_zero(); },
        [](const Params& p, Precision prec) {
          return exact_sides(pan_xu_check(get_int(p, "n"), get_list(p, "u"), get_list(p, "m"),
                                          get_rat(p, "x"), get_rat(p, "y")),
                             prec);
        },
        [] {
          std::vector<Params> out;
          for (size_t r = 1; r <= 2; ++r) {
            for (const auto& u : boxes(r + 1, 0, 2)) {
              for (const auto& m : boxes(r, 0, 1)) {
                for (long n = 1; n <= 8; ++n) {
                  for (const auto& [x, y] : {std::pair{"1", "1"}, std::pair{"2", "-1/3"},
                                             std::pair{"-1/2", "3/2"}}) {
                    out.push_back(Params{{"n", std::to_string(n)},
                                         {"u", join(u)},
                                         {"m", join(m)},
                                         {"x", x},
                                         {"y", y}});
                  }
                }
              }
            }
          }
          return out;
        });
    d.sampler = [](std::mt19937_64& rng, bool outside) {
      const size_t r = static_cast<size_t>(uniform_int(rng, 1, 2));
      std::vector<int> u, m;
      for (size_t i = 0; i <= r; ++i) u.push_back(static_cast<int>(uniform_int(rng, 0, 2)));
      for (size_t i = 0; i < r; ++i) m.push_back(static_cast<int>(uniform_int(rng, 0, 1)));
      const Rational x = sample_rational(rng, Rational(-2), Rational(2));
      const Rational y = outside ? -x : sample_rational(rng, Rational(-2), Rational(2));
      return Params{{"n", std::to_string(uniform_int(rng, 1, 8))},
                    {"u", join(u)},
                    {"m", join(m)},
                    {"x", x.to_string()},
                    {"y", y.to_string()}};
    };
    c.push_back(std::move(d));
  }

  const auto ap_points = [](std::vector<Params> base) {
    return with_ap(base, {{"1/2", "1/2"}, {"-1", "1/2"}, {"1", "2/5"}});
  };

  c.push_back(polylog_descriptor(
      "INTRO_SERIES",
      "Li_s(a) = Li*_{ {1}_s }(1-p, {1}_(s-2), 1+ap/(1-p)) - Li*_{ {1}_s }(1-p, {1}_(s-1)) for "
      "|a| <= min(1, 2/p - 1)",
      PolylogIdentity::IntroSeries,
      {int_param("s", 2, 4), rat_param("a", Rational(-1), one), rat_param("p", kPLo, kPHi)},
      "MAIN_AP", "li(s, a)", "depth-s Li* difference", kSeriesTol,
      [ap_points] { return ap_points(product({{"s", int_range(2, 4)}})); }));

  c.push_back(polylog_descriptor(
      "INTRO_RED_L", "Li*_{ {1}_s }(1-p, {1}_(s-1)) = -Li_s(1 - 1/p)", PolylogIdentity::IntroRedL,
      {int_param("s", 2, 4), rat_param("p", Rational(1, 2), kPHi)}, "INTRO_RED",
      "depth-s Li*", "-li(s, 1-1/p)", kSeriesTol,
      [] { return product({{"s", int_range(2, 4)}, {"p", texts({"1/2", "3/4"})}}); }));

  c.push_back(polylog_descriptor(
      "INTRO_RED_R",
      "Li*_{ {1}_s }(1-p, {1}_(s-2), 1+ap/(1-p)) = Li_s(a) - Li_s(1 - 1/p)",
      PolylogIdentity::IntroRedR,
      {int_param("s", 2, 4), rat_param("a", Rational(-1), one), rat_param("p", Rational(1, 2), kPHi)},
      "INTRO_RED", "depth-s Li*", "li(s, a) - li(s, 1-1/p)", kSeriesTol, [] {
        return product({{"s", int_range(2, 4)},
                        {"a", texts({"-1", "1/2", "1"})},
                        {"p", texts({"1/2", "3/4"})}});
      }));

  const auto main_grid = [](Family family) {
    return [family] {
      return with_ap(product({{"shape", shape_texts(family)}}),
                     {{"1", "3/10"}, {"1", "1/2"}, {"1", "7/10"}, {"1/2", "1/2"}, {"-1", "1/2"}});
    };
  };
  const auto a1_grid = [](Family family) {
    return [family] {
      return product({{"shape", shape_texts(family)}, {"p", texts({"3/10", "1/2", "7/10"})}});
    };
  };
  const auto red1_grid = [](Family family) {
    return [family] { return product({{"shape", shape_texts(family)}, {"p", texts({"1/2", "3/4"})}}); };
  };
  const auto red2_grid = [](Family family) {
    return [family] {
      return product({{"shape", shape_texts(family)},
                      {"a", texts({"-1", "0", "1/4"})},
                      {"p", texts({"1/2", "3/4"})}});
    };
  };

  for (Family family : {Family::A, Family::B}) {
    const bool fa = family == Family::A;
    const std::string tag = fa ? "LI1_" : "LI2_";
    const std::string args_main =
        fa ? "(1-p, {1}_(m_1), 1/(1-p), {1}_(u_1), ..., 1-p, {1}_(m_d), 1+ap/(1-p))"
           : "(1-p, {1}_(m_1), 1/(1-p), {1}_(u_1), ..., 1-p, {1}_(m_d), 1/(1-p), {1}_(u_d - 1), "
             "1-p+ap)";
    const std::string args_sub =
        fa ? "(1-p, {1}_(m_1), 1/(1-p), {1}_(u_1), ..., 1-p, {1}_(m_d + 1))"
           : "(1-p, {1}_(m_1), 1/(1-p), {1}_(u_1), ..., 1-p, {1}_(m_d), 1/(1-p), {1}_(u_d - 1), "
             "1-p)";
    const std::string s_text =
        fa ? "s = (m_1+2, {1}_(u_1), ..., m_d+2)" : "s = (m_1+2, {1}_(u_1), ..., m_d+2, {1}_(u_d))";
    const PolylogIdentity main_id = fa ? PolylogIdentity::Li1Main : PolylogIdentity::Li2Main;
    const PolylogIdentity a1_id = fa ? PolylogIdentity::Li1A1 : PolylogIdentity::Li2A1;
    const PolylogIdentity red1_id = fa ? PolylogIdentity::Li1Red1 : PolylogIdentity::Li2Red1;
    const PolylogIdentity red2_id = fa ? PolylogIdentity::Li1Red2 : PolylogIdentity::Li2Red2;
    const Rational red_p_hi = kPHi;
    const std::string red_box = fa ? "RED_BOX" : "RED_BOX_B";

    c.push_back(polylog_descriptor(
        tag + "MAIN",
        "Li*_s({1}_(d'-1), a) = Li*_{ {1}_|s| }" + args_main + " - Li*_{ {1}_|s| }" + args_sub +
            ", " + s_text + ", |a| <= min(1, 2/p - 1)",
        main_id,
        {shape_param(family), rat_param("a", Rational(-1), one), rat_param("p", kPLo, kPHi)},
        "MAIN_AP", "Li*_s({1}, a)", "depth-|s| Li* difference", kSeriesTol, main_grid(family)));

    c.push_back(polylog_descriptor(
        tag + "A1",
        "zeta*(s) = Li*_{ {1}_|s| }" + args_main + " - Li*_{ {1}_|s| }" + args_sub +
            " at a = 1, 0 < p < 1, " + s_text,
        a1_id, {shape_param(family), rat_param("p", kPLo, kPHi)}, "A1_P", "zeta*(s)",
        "depth-|s| Li* difference", kSeriesTol, a1_grid(family)));

    {
      IdentityDescriptor d;
      d.id = tag + "EX";
      d.anchor = fa ? "Li* difference for s = {2}_d at a = 1 equals (2 - 4^(1-d)) zeta(2d)"
                    : "Li* difference for s = ({2}_d, 1) at a = 1 equals 2 zeta(2d+1)";
      d.mode = Mode::Numeric;
      d.params = {int_param("d", 1, 2), rat_param("p", kPLo, kPHi)};
      d.constraint = "A1_P";
      d.lhs_binding = "zeta_star_closed";
      d.rhs_binding = "depth-|s| Li* difference";
      d.default_tolerance = kSeriesTol;
      d.in_domain = [](const Params& p) {
        return get_int(p, "d") >= 1 && domain_check(Constraint::A1P, Rational(1), get_rat(p, "p"));
      };
      d.evaluate = [fa](const Params& p, double tol, Precision prec) {
        const int dd = static_cast<int>(get_int(p, "d"));
        ShapeBlocks shape{fa ? Family::A : Family::B, std::vector<int>(static_cast<size_t>(dd), 0),
                          std::vector<int>(static_cast<size_t>(fa ? dd - 1 : dd), 0)};
        if (!fa) shape.u.back() = 1;
        const BigReal closed =
            zeta_star_closed(fa ? ClosedForm::TwoD : ClosedForm::TwoDOne, dd, prec);
        return closed_vs(closed, a1_difference(shape, get_rat(p, "p"), tol, prec), true);
      };
      d.grid = [] {
        return product({{"d", int_range(1, 2)}, {"p", texts({"3/10", "1/2", "7/10"})}});
      };
      c.push_back(std::move(d));
    }

    c.push_back(polylog_descriptor(
        tag + "RED1",
        "Li*_{ {1}_|s| }" + args_sub + " = -Li*_s({1}_(d'-1), 1 - 1/p), " + s_text, red1_id,
        {shape_param(family), rat_param("p", Rational(1, 2), red_p_hi)}, red_box,
        "depth-|s| Li*", "depth-d' Li*", kSeriesTol, red1_grid(family)));

    c.push_back(polylog_descriptor(
        tag + "RED2",
        "Li*_{ {1}_|s| }" + args_main + " = Li*_s({1}_(d'-1), a) - Li*_s({1}_(d'-1), 1 - 1/p), " +
            s_text,
        red2_id,
        {shape_param(family), rat_param("a", Rational(-1), Rational(1, 3)),
         rat_param("p", Rational(1, 2), red_p_hi)},
        red_box, "depth-|s| Li*", "depth-d' Li* difference", kSeriesTol, red2_grid(family)));
  }

  c.push_back(exact_descriptor(
      "MEAN_FINITE",
      "(1/(n+1)) sum_{k<=n} zeta*_k(s; a) = binomial-ratio chain sum of length |s|+1 with "
      "a^(n_(|s|+1)) / ((Q(s)+n_|s|+1) n_1...n_|s|)",
      {int_param("n", 1, 12), comp_param("s", 1, 4), rat_param("a", Rational(-2), Rational(2))},
      "NONE", "mean_lhs", "mean_rhs (Q-coupled DP)", always(),
      [](const Params& p, Precision prec) {
        const long n = get_int(p, "n");
        const Composition s = get_comp(p, "s");
        const Rational a = get_rat(p, "a");
        return exact_sides(mean_lhs(n, s, a), mean_rhs(n, s, a), prec);
      },
      [] {
        return product({{"n", int_range(1, 12)},
                        {"s", comp_texts(4)},
                        {"a", texts({"-1", "1/2", "1", "2"})}});
      }));

  c.push_back(exact_descriptor(
      "MEAN_EX1",
      "(1/(n+1)) sum_{k<=n} zeta*_k({1}_d) = sum over d-chains of 1/(n_1...n_(d-1) (n_d+1))",
      {int_param("n", 1, 12), int_param("d", 1, 4)}, "NONE", "mean_lhs with s = {1}_d",
      "d-chain sum", always(),
      [](const Params& p, Precision prec) {
        const long n = get_int(p, "n");
        const int d = static_cast<int>(get_int(p, "d"));
        return exact_sides(mean_lhs(n, Composition::ones(d), Rational(1)), mean_example1_rhs(n, d),
                           prec);
      },
      [] { return product({{"n", int_range(1, 12)}, {"d", int_range(1, 4)}}); }));

  c.push_back(exact_descriptor(
      "MEAN_SUM_HK", "sum_{k<=n} H_k = (n+1)(H_(n+1) - 1)", {int_param("n", 1, 50)}, "NONE",
      "sum of harmonic numbers", "(n+1)(H_(n+1) - 1)", always(),
      [](const Params& p, Precision prec) { return exact_sides(mean_sum_hk(get_int(p, "n")), prec); },
      [] { return product({{"n", int_range(1, 50)}}); }));

  c.push_back(polylog_descriptor(
      "MEAN_INF_A",
      "Li*_s({1}_(d-1), a) = binomial-ratio chain sum of length |s|+1 over all chains, "
      "whenever the left side converges",
      PolylogIdentity::MeanInfA, {comp_param("s", 2, 3), rat_param("a", Rational(-1), one)},
      "LI_CONV", "Li*_s({1}, a)", "MEAN_FULL kernel sum", kKernelTol, [] {
        return product({{"s", texts({"2", "1,1", "2,1"})}, {"a", texts({"1", "1/2", "-1"})}});
      }));

  c.push_back(polylog_descriptor(
      "MEAN_INF_1",
      "zeta*(s) = sum over chains of length |s| of 1/((Q(s)+1)(Q(s)+n_|s|+1) n_1...n_(|s|-1)), "
      "s_1 > 1",
      PolylogIdentity::MeanInf1, {comp_param("s", 2, 4)}, "S1_GE_2", "zeta*(s)",
      "MEAN_INF kernel sum", kKernelTol,
      [] { return product({{"s", texts({"2", "3", "2,2"})}}); }));

  {
    IdentityDescriptor d;
    d.id = "MEAN_EX2";
    d.anchor =
        "sum over 2d-chains of 1/((1 + sum_{i<=2d} (-1)^(i-1) n_i)(1 + sum_{i<=2d-1} (-1)^(i-1) "
        "n_i) n_1...n_(2d-1)) = zeta*({2}_d) = (2 - 4^(1-d)) zeta(2d)";
    d.mode = Mode::Numeric;
    d.params = {int_param("d", 1, 2)};
    d.constraint = "NONE";
    d.lhs_binding = "MEAN_INF kernel sum with s = {2}_d";
    d.rhs_binding = "zeta_star_closed";
    d.default_tolerance = kKernelTol;
    d.in_domain = [](const Params& p) { return get_int(p, "d") >= 1; };
    d.evaluate = [](const Params& p, double tol, Precision prec) {
      const int dd = static_cast<int>(get_int(p, "d"));
      const EvalResult series =
          adaptive_sum(QKernelSpec{Composition::repeated(2, dd), KernelForm::MeanInf, Rational(1)},
                       kernel_schedule(tol), prec);
      return closed_vs(zeta_star_closed(ClosedForm::TwoD, dd, prec), series, false);
    };
    d.grid = [] { return product({{"d", int_range(1, 2)}}); };
    c.push_back(std::move(d));
  }

  c.push_back(exact_descriptor(
      "BINOM_RATIO", "sum_{k<=m} C(m,k)/C(n,k) = m/(n+1-m)",
      {int_param("m", 1, 20), int_param("n", 1, 20)}, "M_LE_N", "binom_ratio_sum",
      "m/(n+1-m)",
      [](const Params& p) {
        const long m = get_int(p, "m");
        return m >= 1 && m <= get_int(p, "n");
      },
      [](const Params& p, Precision prec) {
        const long m = get_int(p, "m"), n = get_int(p, "n");
        return exact_sides(binom_ratio_sum(m, n), Rational(m, n + 1 - m), prec);
      },
      [] {
        std::vector<Params> out;
        for (long n = 1; n <= 20; ++n)
          for (long m = 1; m <= n; ++m)
            out.push_back(Params{{"m", std::to_string(m)}, {"n", std::to_string(n)}});
        return out;
      }));

  return c;
}

IdentityReport skipped(const IdentityDescriptor& desc, Params params, std::string message) {
  IdentityReport r;
  r.id = desc.id;
  r.params = std::move(params);
  r.mode = desc.mode;
  r.status = Status::Skipped;
  r.anchor = desc.anchor;
  r.message = std::move(message);
  return r;
}

BigReal to_big(const Value& v, Precision prec) {
  if (const auto* q = std::get_if<Rational>(&v)) return BigReal(*q, prec);
  return std::get<BigReal>(v);
}

void compare(IdentityReport& report, const SideValues& sides, double tol, Precision prec) {
  report.lhs = sides.lhs;
  report.rhs = sides.rhs;
  report.cost.lhs_terms = sides.lhs_terms;
  report.cost.rhs_terms = sides.rhs_terms;

  const auto* lq = std::get_if<Rational>(&sides.lhs);
  const auto* rq = std::get_if<Rational>(&sides.rhs);
  if (report.mode == Mode::Exact && lq && rq) {
    const Rational d = abs(*lq - *rq);
    report.abs_diff = d;
    const double scale = std::max(abs(*lq).to_double(), abs(*rq).to_double());
    report.rel_diff = scale > 0 ? d.to_double() / scale : d.to_double();
    report.tolerance = 0;
    report.pass = d.is_zero();
    report.status = report.pass ? Status::Pass : Status::Fail;
    return;
  }
  const BigReal l = to_big(sides.lhs, prec), r = to_big(sides.rhs, prec);
  const BigReal d = abs(l - r);
  report.abs_diff = d;
  const double scale = std::max(abs(l).to_double(), abs(r).to_double());
  report.rel_diff = scale > 0 ? d.to_double() / scale : d.to_double();
  // Each side was evaluated to tol/2; slack covers rounding at the working precision.
  report.tolerance = tol + std::ldexp(1.0, -static_cast<int>(prec) + 16);
  if (!sides.converged) {
    report.pass = false;
    report.status = Status::NotConverged;
    report.message = "series did not reach the tolerance within the truncation budget";
    return;
  }
  report.pass = d.to_double() <= report.tolerance;
  report.status = report.pass ? Status::Pass : Status::Fail;
}

}  // namespace

const char* mode_name(Mode mode) {
  switch (mode) {
    case Mode::Exact: return "EXACT";
    case Mode::Numeric: return "NUMERIC";
    case Mode::Quadrature: return "QUADRATURE";
  }
  return "?";
}

Mode parse_mode(std::string_view text) {
  std::string upper(text);
  std::transform(upper.begin(), upper.end(), upper.begin(), [](unsigned char ch) {
    return static_cast<char>(std::toupper(ch));
  });
  for (Mode m : {Mode::Exact, Mode::Numeric, Mode::Quadrature})
    if (upper == mode_name(m)) return m;
  throw Error(ErrorCode::Schema, "unknown mode '" + std::string(text) + "'");
}

const char* status_name(Status status) {
  switch (status) {
    case Status::Pass: return "PASS";
    case Status::Fail: return "FAIL";
    case Status::Skipped: return "SKIPPED";
    case Status::NotConverged: return "NOT_CONVERGED";
  }
  return "?";
}

const std::vector<IdentityDescriptor>& list_identities() {
  static const std::vector<IdentityDescriptor> catalog = build_catalog();
  return catalog;
}

const IdentityDescriptor& find_identity(std::string_view id) {
  for (const auto& d : list_identities())
    if (d.id == id) return d;
  throw Error(ErrorCode::Schema, "unknown identity '" + std::string(id) + "'");
}

Params normalize_params(const IdentityDescriptor& desc, const Params& params) {
  for (const auto& [name, value] : params) {
    const bool known = std::any_of(desc.params.begin(), desc.params.end(),
                                   [&](const ParamSpec& s) { return s.name == name; });
    if (!known)
      throw Error(ErrorCode::Schema, "identity " + desc.id + " has no parameter '" + name + "'");
  }
  Params filled = params;
  for (const ParamSpec& spec : desc.params) {
    if (!filled.count(spec.name) && spec.default_value) filled[spec.name] = *spec.default_value;
  }
  Params out;
  for (const ParamSpec& spec : desc.params) out[spec.name] = canonical(spec, filled);
  return out;
}

IdentityReport verify(std::string_view id, const Params& params, const VerifyOptions& options) {
  const IdentityDescriptor& desc = find_identity(id);
  const Params p = normalize_params(desc, params);
  const double tol = options.tolerance > 0 ? options.tolerance : desc.default_tolerance;
  if (desc.mode != Mode::Exact && !(tol > 0))
    throw Error(ErrorCode::Schema, "tolerance must be positive");

  if (options.enforce_domain && !desc.in_domain(p))
    return skipped(desc, p, "parameters outside " + desc.constraint);

  IdentityReport report;
  report.id = desc.id;
  report.params = p;
  report.mode = desc.mode;
  report.anchor = desc.anchor;

  const auto start = std::chrono::steady_clock::now();
  try {
    const SideValues sides = desc.evaluate(p, tol / 2, options.precision);
    compare(report, sides, tol, options.precision);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::Schema) throw;
    if (e.code() == ErrorCode::Domain && options.enforce_domain) {
      report = skipped(desc, p, e.what());
    } else {
      report.pass = false;
      report.status = e.code() == ErrorCode::NotConverged ? Status::NotConverged : Status::Fail;
      report.message = std::string(error_code_name(e.code())) + ": " + e.what();
    }
  }
  report.cost.wall_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return report;
}

std::vector<Job> grid_jobs(const std::vector<std::string>& ids) {
  std::vector<Job> jobs;
  for (const auto& id : ids) {
    const IdentityDescriptor& desc = find_identity(id);
    for (auto& params : desc.grid()) jobs.push_back(Job{desc.id, std::move(params)});
  }
  return jobs;
}

bool report_less(const IdentityReport& lhs, const IdentityReport& rhs) {
  if (lhs.id != rhs.id) return lhs.id < rhs.id;
  return lhs.params < rhs.params;
}

std::vector<IdentityReport> verify_all(const std::vector<Job>& jobs, const VerifyOptions& options,
                                       int workers) {
  std::vector<IdentityReport> reports(jobs.size());
  std::atomic<size_t> next{0};
  std::mutex error_mutex;
  std::exception_ptr first_error;
  auto work = [&] {
    for (size_t i = next++; i < jobs.size(); i = next++) {
      try {
        reports[i] = verify(jobs[i].id, jobs[i].params, options);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    }
    mpfr_free_cache2(MPFR_FREE_LOCAL_CACHE);
  };
  const int count = std::max(1, std::min<int>(workers, static_cast<int>(jobs.size())));
  if (count == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < count; ++t) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  if (first_error) std::rethrow_exception(first_error);
  std::stable_sort(reports.begin(), reports.end(), report_less);
  return reports;
}

std::vector<IdentityReport> fuzz(std::string_view id, std::uint64_t seed, int trials,
                                 const VerifyOptions& options, bool outside_domain) {
  if (trials < 1) throw Error(ErrorCode::Schema, "trials must be >= 1");
  const IdentityDescriptor& desc = find_identity(id);
  std::mt19937_64 rng(seed);
  constexpr int kAttempts = 1000;
  VerifyOptions opts = options;
  opts.enforce_domain = !outside_domain;
  std::vector<IdentityReport> reports;
  for (int t = 0; t < trials; ++t) {
    std::optional<Params> point;
    for (int attempt = 0; attempt < kAttempts && !point; ++attempt) {
      Params candidate = desc.sampler ? desc.sampler(rng, outside_domain)
                                      : sample_generic(desc, rng, outside_domain);
      candidate = normalize_params(desc, candidate);
      if (desc.in_domain(candidate) != outside_domain) point = std::move(candidate);
    }
    if (!point) {
      reports.push_back(skipped(desc, {}, outside_domain ? "no parameter point outside the domain"
                                                         : "no parameter point inside the domain"));
      continue;
    }
    reports.push_back(verify(desc.id, *point, opts));
  }
  return reports;
}

std::string value_to_decimal(const Value& value, int digits) {
  if (const auto* q = std::get_if<Rational>(&value)) {
    if (q->is_integer()) return q->to_string();
    return BigReal(*q, std::max<Precision>(kDefaultPrecision, digits * 4)).to_string(digits);
  }
  return std::get<BigReal>(value).to_string(digits);
}

std::string value_to_text(const Value& value, int digits) {
  if (const auto* q = std::get_if<Rational>(&value)) return q->to_string();
  return std::get<BigReal>(value).to_string(digits);
}

}  // namespace polystar
