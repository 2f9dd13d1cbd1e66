#include "run_config.hpp"

#include <cstdlib>
#include <fstream>
#include <stdexcept>

namespace polystar::cli {

namespace {

std::string trim(const std::string& text) {
  const auto first = text.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = text.find_last_not_of(" \t\r");
  return text.substr(first, last - first + 1);
}

long to_long(const std::string& key, const std::string& value) {
  size_t used = 0;
  long out = 0;
  try {
    out = std::stol(value, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != value.size())
    throw std::invalid_argument(key + " must be an integer, got '" + value + "'");
  return out;
}

double to_double(const std::string& key, const std::string& value) {
  size_t used = 0;
  double out = 0;
  try {
    out = std::stod(value, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != value.size())
    throw std::invalid_argument(key + " must be a number, got '" + value + "'");
  return out;
}

void apply_config_file(const std::string& path, RunConfig& config) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot read config file '" + path + "'");
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument(path + ":" + std::to_string(line_no) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key == "precision") {
      config.precision = to_long(key, value);
    } else if (key == "tolerance") {
      config.tolerance = to_double(key, value);
    } else if (key == "format") {
      if (value == "json") {
        config.format = Format::Json;
      } else if (value == "human") {
        config.format = Format::Human;
      } else {
        throw std::invalid_argument("format must be human or json");
      }
    } else if (key == "jobs") {
      config.jobs = static_cast<int>(to_long(key, value));
    } else if (key == "seed") {
      config.seed = static_cast<std::uint64_t>(to_long(key, value));
    } else if (key == "trials") {
      config.trials = static_cast<int>(to_long(key, value));
    } else if (key.rfind("point.", 0) == 0) {
      const std::string id = key.substr(6);
      find_identity(id);
      config.grid_overrides[id].push_back(parse_point(value));
    } else {
      throw std::invalid_argument(path + ":" + std::to_string(line_no) + ": unknown key '" + key + "'");
    }
  }
}

}  // namespace

void RunConfig::validate() const {
  if (precision < kMinPrecision)
    throw std::invalid_argument("precision must be at least " + std::to_string(kMinPrecision));
  if (tolerance && !(*tolerance > 0)) throw std::invalid_argument("tolerance must be positive");
  if (jobs < 1) throw std::invalid_argument("jobs must be >= 1");
  if (trials < 1) throw std::invalid_argument("trials must be >= 1");
}

Params parse_point(const std::string& text) {
  Params out;
  size_t start = 0;
  while (start <= text.size()) {
    size_t end = text.find(';', start);
    if (end == std::string::npos) end = text.size();
    const std::string item = trim(text.substr(start, end - start));
    if (!item.empty()) {
      const auto eq = item.find('=');
      if (eq == std::string::npos) throw std::invalid_argument("expected k=v in '" + item + "'");
      out[trim(item.substr(0, eq))] = trim(item.substr(eq + 1));
    }
    start = end + 1;
  }
  return out;
}

RunConfig resolve_config(const FlagValues& flags) {
  RunConfig config;
  if (flags.config_path) apply_config_file(*flags.config_path, config);
  if (const char* env = std::getenv("POLYSTAR_PRECISION"); env && *env)
    config.precision = to_long("POLYSTAR_PRECISION", env);
  if (flags.precision) config.precision = *flags.precision;
  if (flags.tolerance) config.tolerance = *flags.tolerance;
  if (flags.json) config.format = *flags.json ? Format::Json : Format::Human;
  if (flags.jobs) config.jobs = *flags.jobs;
  if (flags.seed) config.seed = *flags.seed;
  if (flags.trials) config.trials = *flags.trials;
  config.validate();
  return config;
}

}  // namespace polystar::cli
