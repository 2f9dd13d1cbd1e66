#include "report_json.hpp"

namespace polystar::cli {

namespace {

const char* kind_name(ParamKind kind) {
  switch (kind) {
    case ParamKind::Integer: return "integer";
    case ParamKind::Rational: return "rational";
    case ParamKind::Composition: return "composition";
    case ParamKind::ShapeA: return "shape_a";
    case ParamKind::ShapeB: return "shape_b";
    case ParamKind::IntList: return "int_list";
  }
  return "?";
}

nlohmann::json value_json(const std::optional<Value>& value) {
  if (!value) return nullptr;
  return value_to_decimal(*value);
}

}  // namespace

nlohmann::json report_to_json(const IdentityReport& r) {
  nlohmann::json j;
  j["id"] = r.id;
  j["params"] = nlohmann::json(r.params);
  j["mode"] = mode_name(r.mode);
  j["lhs"] = value_json(r.lhs);
  j["rhs"] = value_json(r.rhs);
  j["abs_diff"] = value_json(r.abs_diff);
  if (r.mode == Mode::Exact && r.lhs && r.rhs) {
    j["lhs_exact"] = value_to_text(*r.lhs);
    j["rhs_exact"] = value_to_text(*r.rhs);
  }
  j["rel_diff"] = r.rel_diff;
  j["tolerance"] = r.tolerance;
  j["pass"] = r.pass;
  j["status"] = status_name(r.status);
  j["anchor"] = r.anchor;
  j["cost"] = {{"lhs_terms", r.cost.lhs_terms},
               {"rhs_terms", r.cost.rhs_terms},
               {"wall_ms", r.cost.wall_ms}};
  if (!r.message.empty()) j["message"] = r.message;
  return j;
}

nlohmann::json descriptor_to_json(const IdentityDescriptor& d) {
  nlohmann::json params = nlohmann::json::array();
  for (const auto& p : d.params) {
    params.push_back({{"name", p.name},
                      {"kind", kind_name(p.kind)},
                      {"lo", p.lo.to_string()},
                      {"hi", p.hi.to_string()}});
  }
  return {{"id", d.id},
          {"mode", mode_name(d.mode)},
          {"anchor", d.anchor},
          {"constraint", d.constraint},
          {"params", params},
          {"lhs", d.lhs_binding},
          {"rhs", d.rhs_binding},
          {"default_tolerance", d.default_tolerance}};
}

int Summary::exit_code() const {
  if (fail > 0) return 1;
  if (not_converged > 0) return 3;
  return 0;
}

Summary summarize(const std::vector<IdentityReport>& reports) {
  Summary s;
  for (const auto& r : reports) {
    switch (r.status) {
      case Status::Pass: ++s.pass; break;
      case Status::Fail: ++s.fail; break;
      case Status::Skipped: ++s.skipped; break;
      case Status::NotConverged: ++s.not_converged; break;
    }
  }
  return s;
}

nlohmann::json summary_to_json(const Summary& s) {
  return {{"pass", s.pass},
          {"fail", s.fail},
          {"skipped", s.skipped},
          {"not_converged", s.not_converged},
          {"exit_code", s.exit_code()}};
}

}  // namespace polystar::cli
