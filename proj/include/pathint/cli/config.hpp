#pragma once

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "pathint/core/error.hpp"

namespace pathint::cli {

class usage_error : public invalid_input {
 public:
  using invalid_input::invalid_input;
};

class unknown_experiment_error : public usage_error {
 public:
  using usage_error::usage_error;
};

class output_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr const char* output_dir_env = "PATHINT_OUTPUT_DIR";

/// Experiment name, parameters, seed and output directory. Parameters are
/// kept as text and typed against the experiment's schema when it runs.
struct ExperimentConfig {
  std::string experiment;
  std::map<std::string, std::string> params;
  std::uint64_t seed = 1;
  std::string output_dir;
};

namespace detail {

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

inline std::uint64_t parse_seed(const std::string& v) {
  if (v.empty() || v.find_first_not_of("0123456789") != std::string::npos)
    throw usage_error("seed must be a non-negative integer, got '" + v + "'");
  try {
    return std::stoull(v);
  } catch (const std::exception&) {
    throw usage_error("seed out of range: '" + v + "'");
  }
}

}  // namespace detail

/// Sets one key, routing the reserved keys experiment, seed and output_dir.
inline void set_value(ExperimentConfig& c, const std::string& key, const std::string& value) {
  if (key.empty()) throw usage_error("empty configuration key");
  if (key == "experiment")
    c.experiment = value;
  else if (key == "seed")
    c.seed = detail::parse_seed(value);
  else if (key == "output_dir")
    c.output_dir = value;
  else
    c.params[key] = value;
}

/// Flat key = value text; '#' and ';' start comments, blank lines ignored.
inline ExperimentConfig parse_config(std::istream& in, const std::string& origin = "<config>") {
  ExperimentConfig c;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find_first_of("#;");
    if (hash != std::string::npos) line.erase(hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw usage_error(origin + ":" + std::to_string(lineno) + ": expected key = value");
    const std::string key = detail::trim(line.substr(0, eq));
    if (c.params.count(key) || (key == "experiment" && !c.experiment.empty()))
      throw usage_error(origin + ":" + std::to_string(lineno) + ": duplicate key '" + key + "'");
    set_value(c, key, detail::trim(line.substr(eq + 1)));
  }
  return c;
}

inline ExperimentConfig parse_config_text(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in);
}

inline ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw usage_error("cannot read config file '" + path + "'");
  return parse_config(in, path);
}

/// Output directory: the config value, else $PATHINT_OUTPUT_DIR, else "pathint-out".
inline std::string resolve_output_dir(const ExperimentConfig& c) {
  if (!c.output_dir.empty()) return c.output_dir;
  if (const char* env = std::getenv(output_dir_env); env != nullptr && *env != '\0') return env;
  return "pathint-out";
}

}  // namespace pathint::cli
