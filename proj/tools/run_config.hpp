#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "polystar/bigreal.hpp"
#include "polystar/catalog.hpp"

namespace polystar::cli {

enum class Format { Human, Json };

struct RunConfig {
  Precision precision = kDefaultPrecision;
  std::optional<double> tolerance;  // unset: per-identity defaults
  Format format = Format::Human;
  int jobs = 1;
  std::uint64_t seed = 1;
  int trials = 20;
  // Explicit grid points replacing an identity's built-in grid.
  std::map<std::string, std::vector<Params>> grid_overrides;

  void validate() const;
};

// Values given on the command line; unset fields fall through to env, config file, default.
struct FlagValues {
  std::optional<std::string> config_path;
  std::optional<long> precision;
  std::optional<double> tolerance;
  std::optional<bool> json;
  std::optional<int> jobs;
  std::optional<std::uint64_t> seed;
  std::optional<int> trials;
};

// Defaults < config file < POLYSTAR_PRECISION < flags. Throws std::invalid_argument on bad input.
RunConfig resolve_config(const FlagValues& flags);

// "k=v;k=v" into a parameter map.
Params parse_point(const std::string& text);

}  // namespace polystar::cli
