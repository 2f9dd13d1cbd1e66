#include <chrono>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "polystar/catalog.hpp"
#include "polystar/chain_sum.hpp"
#include "polystar/compositions.hpp"
#include "polystar/errors.hpp"
#include "polystar/exact.hpp"
#include "polystar/polylog.hpp"
#include "report_json.hpp"
#include "run_config.hpp"

using namespace polystar;
using namespace polystar::cli;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitNotConverged = 3;

constexpr double kEvalTol = 1e-10;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

double elapsed_ms(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
}

std::string params_text(const Params& params) {
  std::string out;
  for (const auto& [k, v] : params) {
    if (!out.empty()) out += ';';
    out += k + "=" + v;
  }
  return out;
}

std::vector<Rational> parse_rational_list(const std::string& text) {
  std::vector<Rational> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) out.push_back(Rational::parse(item));
  if (out.empty()) throw UsageError("empty argument list");
  return out;
}

// ---- list -----------------------------------------------------------------------------------

struct ListArgs {
  bool json = false;
  std::optional<std::string> mode;
};

int cmd_list(const ListArgs& args, const RunConfig& config) {
  std::optional<Mode> filter;
  if (args.mode) filter = parse_mode(*args.mode);
  std::vector<const IdentityDescriptor*> selected;
  for (const auto& d : list_identities())
    if (!filter || d.mode == *filter) selected.push_back(&d);

  if (args.json || config.format == Format::Json) {
    json out = json::array();
    for (const auto* d : selected) out.push_back(descriptor_to_json(*d));
    std::cout << out.dump(2) << "\n";
    return kExitOk;
  }
  for (const auto* d : selected) {
    std::cout << d->id << "  [" << mode_name(d->mode) << ", " << d->constraint << "]\n    "
              << d->anchor << "\n";
  }
  std::cout << selected.size() << " identities\n";
  return kExitOk;
}

// ---- eval -----------------------------------------------------------------------------------

struct EvalArgs {
  std::string kind;
  std::optional<long> k;
  std::optional<long> n;
  std::optional<std::string> s;
  std::string a = "1";
  std::string p = "1/2";
  std::optional<std::string> x;
  std::optional<double> tol;
  bool json = false;
};

template <class T>
const T& need(const std::optional<T>& value, const char* flag) {
  if (!value) throw UsageError(std::string("missing ") + flag);
  return *value;
}

int print_numeric(const EvalArgs& args, const EvalResult& r, const RunConfig& config) {
  if (args.json || config.format == Format::Json) {
    json out{{"kind", args.kind},
             {"value", r.value.to_string(20)},
             {"error_estimate", r.error_estimate.to_string(3)},
             {"terms_used", r.terms_used},
             {"truncation_level", r.truncation_level},
             {"converged", r.converged}};
    std::cout << out.dump(2) << "\n";
  } else {
    std::cout << r.value.to_string(12) << " +/- " << r.error_estimate.to_string(2);
    if (!r.converged) std::cout << "  (NOT_CONVERGED at N = " << r.truncation_level << ")";
    std::cout << "\n";
  }
  return r.converged ? kExitOk : kExitNotConverged;
}

int print_exact(const EvalArgs& args, const Rational& value, const RunConfig& config) {
  if (args.json || config.format == Format::Json) {
    json out{{"kind", args.kind},
             {"value", value.to_string()},
             {"decimal", value_to_decimal(Value(value), 20)}};
    std::cout << out.dump(2) << "\n";
  } else {
    std::cout << value.to_string() << "\n";
  }
  return kExitOk;
}

int cmd_eval(const EvalArgs& args, const RunConfig& config) {
  const double tol = args.tol.value_or(config.tolerance.value_or(kEvalTol));
  if (!(tol > 0)) throw UsageError("tolerance must be positive");
  const Precision prec = config.precision;
  const Rational a = Rational::parse(args.a);
  const Rational p = Rational::parse(args.p);

  if (args.kind == "mhsv") {
    return print_exact(args, mhsv(need(args.k, "--k"), Composition::parse(need(args.s, "--s")), a),
                       config);
  }
  if (args.kind == "mneimneh") {
    FiniteSumParams f{need(args.n, "--n"), Composition::parse(need(args.s, "--s")), a, p};
    return print_exact(args, mneimneh_lhs(f), config);
  }
  if (args.kind == "mean") {
    return print_exact(
        args, mean_lhs(need(args.n, "--n"), Composition::parse(need(args.s, "--s")), a), config);
  }
  if (args.kind == "li") {
    const Composition s = Composition::parse(need(args.s, "--s"));
    if (s.depth() != 1) throw UsageError("li takes a single order; use listar for depth > 1");
    return print_numeric(args, li(s[0], Rational::parse(need(args.x, "--x")), tol, prec), config);
  }
  if (args.kind == "listar") {
    PolylogQuery q{Composition::parse(need(args.s, "--s")), parse_rational_list(need(args.x, "--x")),
                   tol};
    return print_numeric(args, li_star(q, prec), config);
  }
  if (args.kind == "zetastar") {
    return print_numeric(args, zeta_star(Composition::parse(need(args.s, "--s")), tol, prec), config);
  }
  throw UsageError("unknown eval kind '" + args.kind + "'");
}

// ---- verify / fuzz --------------------------------------------------------------------------

void print_reports(const std::vector<IdentityReport>& reports, bool as_json) {
  const Summary summary = summarize(reports);
  if (as_json) {
    json out;
    out["reports"] = json::array();
    for (const auto& r : reports) out["reports"].push_back(report_to_json(r));
    out["summary"] = summary_to_json(summary);
    std::cout << out.dump(2) << "\n";
    return;
  }
  for (const auto& r : reports) {
    std::cout << status_name(r.status) << "  " << r.id << "  {" << params_text(r.params) << "}";
    if (r.lhs && r.rhs) {
      std::cout << "  lhs=" << value_to_text(*r.lhs, 12) << "  rhs=" << value_to_text(*r.rhs, 12);
      if (r.mode != Mode::Exact && r.abs_diff)
        std::cout << "  diff=" << value_to_decimal(*r.abs_diff, 3) << "  tol=" << r.tolerance;
    }
    if (!r.message.empty()) std::cout << "  (" << r.message << ")";
    std::cout << "\n";
  }
  std::cout << reports.size() << " reports: " << summary.pass << " pass, " << summary.fail
            << " fail, " << summary.skipped << " skipped, " << summary.not_converged
            << " not converged\n";
}

struct VerifyArgs {
  std::vector<std::string> ids;
  bool all = false;
  std::vector<std::string> params;
  std::optional<double> tol;
  bool json = false;
  std::optional<int> jobs;
  bool no_domain_check = false;
};

int cmd_verify(const VerifyArgs& args, const RunConfig& config) {
  std::vector<std::string> ids = args.ids;
  if (args.all) {
    if (!ids.empty()) throw UsageError("give identity ids or --all, not both");
    for (const auto& d : list_identities()) ids.push_back(d.id);
  }
  if (ids.empty()) throw UsageError("no identities selected");
  for (const auto& id : ids) find_identity(id);

  std::vector<Job> jobs;
  if (!args.params.empty()) {
    Params point;
    for (const auto& kv : args.params) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) throw UsageError("--param expects k=v, got '" + kv + "'");
      point[kv.substr(0, eq)] = kv.substr(eq + 1);
    }
    for (const auto& id : ids) jobs.push_back(Job{id, point});
  } else {
    for (const auto& id : ids) {
      auto it = config.grid_overrides.find(id);
      if (it != config.grid_overrides.end()) {
        for (const auto& p : it->second) jobs.push_back(Job{id, p});
      } else {
        for (auto& job : grid_jobs({id})) jobs.push_back(std::move(job));
      }
    }
  }

  VerifyOptions options;
  options.tolerance = args.tol.value_or(config.tolerance.value_or(0));
  options.precision = config.precision;
  options.enforce_domain = !args.no_domain_check;
  const auto reports = verify_all(jobs, options, args.jobs.value_or(config.jobs));
  print_reports(reports, args.json || config.format == Format::Json);
  return summarize(reports).exit_code();
}

struct FuzzArgs {
  std::string id;
  std::optional<std::uint64_t> seed;
  std::optional<int> trials;
  std::optional<double> tol;
  bool outside_domain = false;
  bool json = false;
};

int cmd_fuzz(const FuzzArgs& args, const RunConfig& config) {
  VerifyOptions options;
  options.tolerance = args.tol.value_or(config.tolerance.value_or(0));
  options.precision = config.precision;
  auto reports = fuzz(args.id, args.seed.value_or(config.seed), args.trials.value_or(config.trials),
                      options, args.outside_domain);
  print_reports(reports, args.json || config.format == Format::Json);
  return summarize(reports).exit_code();
}

// ---- bench ----------------------------------------------------------------------------------

struct BenchArgs {
  std::string scenario;
  long L = 4;
  long N = 20;
  std::vector<std::string> shapes;
  std::string p = "1/2";
  std::optional<std::string> a;
  std::optional<double> tol;
  bool json = false;
};

int bench_dp_vs_naive(const BenchArgs& args, const RunConfig& config) {
  if (args.L < 1 || args.N < 1) throw UsageError("--L and --N must be >= 1");
  FactorSpec spec;
  for (long i = 0; i < args.L; ++i) spec.factors.push_back({Rational(1, i % 2 ? 2 : 1), 1});

  auto start = std::chrono::steady_clock::now();
  const Rational naive = naive_chain_sum<Rational>(spec, args.N);
  const double naive_ms = elapsed_ms(start);
  start = std::chrono::steady_clock::now();
  const Rational dp = dp_chain_sum<Rational>(spec, args.N);
  const double dp_ms = elapsed_ms(start);

  // Naive forms one L-fold product per chain; the DP does one update per (n, position).
  const BigInt chains = binomial(static_cast<unsigned long>(args.N + args.L - 1),
                                 static_cast<unsigned long>(args.L));
  const BigInt naive_ops = chains * BigInt(args.L);
  const BigInt dp_ops = BigInt(args.N) * BigInt(args.L);
  const bool equal = naive == dp;

  if (args.json || config.format == Format::Json) {
    json out{{"scenario", "dp-vs-naive"},
             {"L", args.L},
             {"N", args.N},
             {"rows",
              {{{"method", "naive"}, {"scalar_ops", naive_ops.get_str()}, {"wall_ms", naive_ms}},
               {{"method", "dp"}, {"scalar_ops", dp_ops.get_str()}, {"wall_ms", dp_ms}}}},
             {"values_equal", equal}};
    std::cout << out.dump(2) << "\n";
  } else {
    std::cout << "dp-vs-naive  L=" << args.L << "  N=" << args.N << "\n";
    std::cout << "method  scalar_ops  wall_ms\n";
    std::cout << "naive   " << naive_ops.get_str() << "  " << naive_ms << "\n";
    std::cout << "dp      " << dp_ops.get_str() << "  " << dp_ms << "\n";
    std::cout << "values " << (equal ? "equal" : "DIFFER") << "\n";
  }
  return equal ? kExitOk : 1;
}

int bench_depth_reduction(const BenchArgs& args, const RunConfig& config) {
  const double tol = args.tol.value_or(config.tolerance.value_or(1e-8));
  const Precision prec = config.precision;
  const Rational p = Rational::parse(args.p);
  std::vector<std::string> shapes = args.shapes;
  if (shapes.empty()) shapes = {"A:m=1;u=", "A:m=3;u=", "A:m=0,1;u=1", "B:m=1;u=1"};

  json rows = json::array();
  bool converged = true;
  for (const auto& text : shapes) {
    const ShapeBlocks shape = ShapeBlocks::parse(text);
    const bool second = args.a.has_value();
    const Rational a = second ? Rational::parse(*args.a) : Rational(1) - inverse(p);
    const Constraint c = shape.family == Family::A ? Constraint::RedBox : Constraint::RedBoxB;
    if (!domain_check(c, a, p))
      throw UsageError("(a, p) outside " + std::string(constraint_name(c)) + " for " + text);
    const Composition s = shape_composition(shape);
    const std::vector<Rational> args_long =
        shape_args(shape, second ? ArgVariant::Main : ArgVariant::Sub, a, p);

    auto start = std::chrono::steady_clock::now();
    const EvalResult lhs = li_star(
        PolylogQuery{Composition::ones(static_cast<int>(args_long.size())), args_long, tol}, prec);
    const double lhs_ms = elapsed_ms(start);

    start = std::chrono::steady_clock::now();
    const Rational reflected = Rational(1) - inverse(p);
    const std::vector<Rational> prefix(static_cast<size_t>(s.depth() - 1), Rational(1));
    EvalResult rhs = second ? li_star_difference(s, prefix, a, reflected, tol, prec) : [&] {
      std::vector<Rational> xs = prefix;
      xs.push_back(reflected);
      EvalResult r = li_star(PolylogQuery{s, xs, tol}, prec);
      r.value = -r.value;
      return r;
    }();
    const double rhs_ms = elapsed_ms(start);
    converged = converged && lhs.converged && rhs.converged;

    for (int side = 0; side < 2; ++side) {
      const EvalResult& r = side == 0 ? lhs : rhs;
      rows.push_back({{"shape", shape.to_string()},
                      {"identity", std::string(shape.family == Family::A ? "LI1_" : "LI2_") +
                                       (second ? "RED2" : "RED1")},
                      {"p", p.to_string()},
                      {"a", a.to_string()},
                      {"side", side == 0 ? "lhs" : "rhs"},
                      {"depth", side == 0 ? s.weight() : s.depth()},
                      {"terms_used", r.terms_used},
                      {"truncation_level", r.truncation_level},
                      {"wall_ms", side == 0 ? lhs_ms : rhs_ms},
                      {"value", r.value.to_string(15)}});
    }
  }

  if (args.json || config.format == Format::Json) {
    std::cout << json{{"scenario", "depth-reduction"}, {"tolerance", tol}, {"rows", rows}}.dump(2)
              << "\n";
  } else {
    std::cout << "shape            side  depth  terms_used  N       wall_ms   value\n";
    for (const auto& row : rows) {
      std::cout << row["shape"].get<std::string>() << "  " << row["side"].get<std::string>() << "  "
                << row["depth"] << "  " << row["terms_used"] << "  " << row["truncation_level"]
                << "  " << row["wall_ms"].get<double>() << "  "
                << row["value"].get<std::string>() << "\n";
    }
  }
  return converged ? kExitOk : kExitNotConverged;
}

int cmd_bench(const BenchArgs& args, const RunConfig& config) {
  if (args.scenario == "dp-vs-naive") return bench_dp_vs_naive(args, config);
  if (args.scenario == "depth-reduction") return bench_depth_reduction(args, config);
  throw UsageError("unknown bench scenario '" + args.scenario + "'");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multiple harmonic-star sums, multiple polylogarithms and identity verification"};
  app.require_subcommand(1);

  FlagValues flags;
  app.add_option("--config", flags.config_path, "key=value configuration file");
  app.add_option("--precision", flags.precision, "working precision in bits (>= 100)");
  app.add_option("--jobs", flags.jobs, "worker threads for verification");

  ListArgs list_args;
  auto* list = app.add_subcommand("list", "list the identity catalog");
  list->add_flag("--json", list_args.json);
  list->add_option("--mode", list_args.mode, "exact | numeric | quadrature");

  EvalArgs eval_args;
  auto* eval = app.add_subcommand("eval", "evaluate a single quantity");
  eval->add_option("kind", eval_args.kind, "mhsv | mneimneh | li | listar | zetastar | mean")
      ->required();
  eval->add_option("--k", eval_args.k);
  eval->add_option("--n", eval_args.n);
  eval->add_option("--s", eval_args.s, "composition, e.g. 2,1");
  eval->add_option("--a", eval_args.a);
  eval->add_option("--p", eval_args.p);
  eval->add_option("--x", eval_args.x, "argument (li) or comma-separated arguments (listar)");
  eval->add_option("--tol", eval_args.tol);
  eval->add_flag("--json", eval_args.json);

  VerifyArgs verify_args;
  auto* verify_cmd = app.add_subcommand("verify", "verify identities on their grids");
  verify_cmd->add_option("ids", verify_args.ids);
  verify_cmd->add_flag("--all", verify_args.all);
  verify_cmd->add_option("--param", verify_args.params, "k=v (repeatable)");
  verify_cmd->add_option("--tol", verify_args.tol);
  verify_cmd->add_flag("--json", verify_args.json);
  verify_cmd->add_option("--jobs", verify_args.jobs);
  verify_cmd->add_flag("--no-domain-check", verify_args.no_domain_check);

  FuzzArgs fuzz_args;
  auto* fuzz_cmd = app.add_subcommand("fuzz", "verify at sampled parameter points");
  fuzz_cmd->add_option("id", fuzz_args.id)->required();
  fuzz_cmd->add_option("--seed", fuzz_args.seed);
  fuzz_cmd->add_option("--trials", fuzz_args.trials);
  fuzz_cmd->add_option("--tol", fuzz_args.tol);
  fuzz_cmd->add_flag("--outside-domain", fuzz_args.outside_domain);
  fuzz_cmd->add_flag("--json", fuzz_args.json);

  BenchArgs bench_args;
  auto* bench = app.add_subcommand("bench", "cost comparisons");
  bench->add_option("scenario", bench_args.scenario, "dp-vs-naive | depth-reduction")->required();
  bench->add_option("--L", bench_args.L);
  bench->add_option("--N", bench_args.N);
  bench->add_option("--shape", bench_args.shapes, "shape blocks, e.g. A:m=3;u= (repeatable)");
  bench->add_option("--p", bench_args.p);
  bench->add_option("--a", bench_args.a);
  bench->add_option("--tol", bench_args.tol);
  bench->add_flag("--json", bench_args.json);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    const RunConfig config = resolve_config(flags);
    if (list->parsed()) return cmd_list(list_args, config);
    if (eval->parsed()) return cmd_eval(eval_args, config);
    if (verify_cmd->parsed()) return cmd_verify(verify_args, config);
    if (fuzz_cmd->parsed()) return cmd_fuzz(fuzz_args, config);
    if (bench->parsed()) return cmd_bench(bench_args, config);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    std::cerr << "error: " << error_code_name(e.code()) << ": " << e.what() << "\n";
    const bool convergence =
        e.code() == ErrorCode::NotConverged || e.code() == ErrorCode::BudgetExceeded;
    return convergence ? kExitNotConverged : kExitUsage;
  }
  return kExitUsage;
}
