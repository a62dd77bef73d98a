#pragma once

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "pathint/cli/config.hpp"

namespace pathint::cli {

/// %.17g, the round-trip precision used in every artifact.
inline std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

enum class Check { within, at_most, at_least };

/// A measured value with an explicit acceptance rule:
///   within:   |value - target| <= tolerance
///   at_most:  value <= target + tolerance
///   at_least: value >= target - tolerance
struct Metric {
  std::string name;
  double value;
  double target;
  double tolerance;
  Check check = Check::within;

  [[nodiscard]] bool pass() const {
    if (!std::isfinite(value)) return false;
    switch (check) {
      case Check::within:
        return std::abs(value - target) <= tolerance;
      case Check::at_most:
        return value <= target + tolerance;
      default:
        return value >= target - tolerance;
    }
  }

  [[nodiscard]] std::string rule() const {
    switch (check) {
      case Check::within:
        return "|value - target| <= tol";
      case Check::at_most:
        return "value <= target + tol";
      default:
        return "value >= target - tol";
    }
  }
};

struct ExperimentReport {
  std::string name;
  std::map<std::string, std::string> parameters;
  std::uint64_t seed = 0;
  std::vector<Metric> metrics;
  std::vector<std::string> artifacts;
  double wall_time = 0.0;

  [[nodiscard]] bool pass() const {
    for (const auto& m : metrics)
      if (!m.pass()) return false;
    return true;
  }

  /// Plain-text form. Artifacts appear by file name and wall time is left
  /// out, so the text depends only on the configuration.
  [[nodiscard]] std::string to_text() const {
    std::ostringstream os;
    os << "experiment: " << name << "\n";
    os << "seed: " << seed << "\n";
    os << "parameters:\n";
    for (const auto& [k, v] : parameters) os << "  " << k << " = " << v << "\n";
    os << "metrics:\n";
    for (const auto& m : metrics)
      os << "  " << (m.pass() ? "PASS " : "FAIL ") << m.name << " value=" << format_number(m.value)
         << " target=" << format_number(m.target) << " tol=" << format_number(m.tolerance) << " (" << m.rule()
         << ")\n";
    os << "artifacts:\n";
    for (const auto& a : artifacts) os << "  " << std::filesystem::path(a).filename().string() << "\n";
    os << "result: " << (pass() ? "PASS" : "FAIL") << "\n";
    return os.str();
  }
};

/// Comma-separated table with a header row.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

  void add(const std::vector<double>& row) {
    if (row.size() != header_.size()) throw invalid_input("CsvTable: row width differs from header");
    rows_.push_back(row);
  }

  [[nodiscard]] std::size_t rows() const noexcept { return rows_.size(); }

  [[nodiscard]] std::string to_string() const {
    std::string out;
    for (std::size_t i = 0; i < header_.size(); ++i) out += (i ? "," : "") + header_[i];
    out += "\n";
    for (const auto& r : rows_) {
      for (std::size_t i = 0; i < r.size(); ++i) out += (i ? "," : "") + format_number(r[i]);
      out += "\n";
    }
    return out;
  }

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<double>> rows_;
};

inline void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw output_error("cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw output_error("failed writing '" + path.string() + "'");
}

inline std::filesystem::path prepare_output_dir(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir)) throw output_error("output directory '" + dir + "' is not writable");
  return dir;
}

}  // namespace pathint::cli
