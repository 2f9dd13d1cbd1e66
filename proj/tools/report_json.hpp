#pragma once

#include <vector>

#include <json.hpp>

#include "polystar/catalog.hpp"

namespace polystar::cli {

nlohmann::json report_to_json(const IdentityReport& report);
nlohmann::json descriptor_to_json(const IdentityDescriptor& desc);

struct Summary {
  int pass = 0;
  int fail = 0;
  int skipped = 0;
  int not_converged = 0;

  int exit_code() const;
};

Summary summarize(const std::vector<IdentityReport>& reports);
nlohmann::json summary_to_json(const Summary& summary);

}  // namespace polystar::cli
