#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <variant>
#include <vector>

#include "polystar/bigreal.hpp"
#include "polystar/rational.hpp"

namespace polystar {

enum class Mode { Exact, Numeric, Quadrature };

const char* mode_name(Mode mode);
Mode parse_mode(std::string_view text);

enum class ParamKind {
  Integer,
  Rational,
  Composition,
  ShapeA,
  ShapeB,
  IntList,
};

// Sampling range for fuzzing. Integers and list entries use [lo, hi]; rationals use [lo, hi]
// with denominators <= 12; compositions use weight in [lo, hi]; shapes use depth d in
// [lo, hi] with every block entry <= entry_max.
struct ParamSpec {
  std::string name;
  ParamKind kind = ParamKind::Integer;
  Rational lo = Rational(0);
  Rational hi = Rational(1);
  int entry_max = 2;
  std::optional<std::string> default_value;
};

// Canonical text values keyed by parameter name.
using Params = std::map<std::string, std::string>;

using Value = std::variant<Rational, BigReal>;

struct SideValues {
  Value lhs;
  Value rhs;
  BigReal lhs_error;
  BigReal rhs_error;
  long lhs_terms = 0;
  long rhs_terms = 0;
  bool converged = true;
};

struct IdentityDescriptor {
  std::string id;
  std::string anchor;
  Mode mode = Mode::Exact;
  std::vector<ParamSpec> params;
  std::string constraint;
  std::string lhs_binding;
  std::string rhs_binding;
  double default_tolerance = 0;
  std::function<bool(const Params&)> in_domain;
  std::function<SideValues(const Params&, double tol, Precision prec)> evaluate;
  std::function<std::vector<Params>()> grid;
  // Replaces the per-parameter sampler when the parameters are coupled.
  std::function<Params(std::mt19937_64&, bool outside_domain)> sampler;
};

enum class Status { Pass, Fail, Skipped, NotConverged };

const char* status_name(Status status);

struct Cost {
  long lhs_terms = 0;
  long rhs_terms = 0;
  double wall_ms = 0;
};

struct IdentityReport {
  std::string id;
  Params params;
  Mode mode = Mode::Exact;
  Status status = Status::Skipped;
  bool pass = false;
  std::optional<Value> lhs;
  std::optional<Value> rhs;
  std::optional<Value> abs_diff;
  double rel_diff = 0;
  double tolerance = 0;
  std::string anchor;
  Cost cost;
  std::string message;
};

const std::vector<IdentityDescriptor>& list_identities();
// Throws Schema for an unknown id.
const IdentityDescriptor& find_identity(std::string_view id);

// Fills defaults, checks names and value syntax, and canonicalizes the values. Throws Schema.
Params normalize_params(const IdentityDescriptor& desc, const Params& params);

struct VerifyOptions {
  double tolerance = 0;  // <= 0 selects the descriptor default
  Precision precision = kDefaultPrecision;
  bool enforce_domain = true;
};

// Never throws on mathematical failure; schema violations throw.
IdentityReport verify(std::string_view id, const Params& params, const VerifyOptions& options = {});

struct Job {
  std::string id;
  Params params;
};

// Built-in grid of every listed id.
std::vector<Job> grid_jobs(const std::vector<std::string>& ids);

// Runs jobs on a pool of `workers` threads; reports are sorted by (id, params).
std::vector<IdentityReport> verify_all(const std::vector<Job>& jobs, const VerifyOptions& options,
                                       int workers);

// Deterministic parameter points inside (or, with outside_domain, outside) the identity's
// domain, each verified.
std::vector<IdentityReport> fuzz(std::string_view id, std::uint64_t seed, int trials,
                                 const VerifyOptions& options, bool outside_domain = false);

bool report_less(const IdentityReport& lhs, const IdentityReport& rhs);

std::string value_to_decimal(const Value& value, int digits = 20);
std::string value_to_text(const Value& value, int digits = 20);

}  // namespace polystar
