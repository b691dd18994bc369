#pragma once

// Named experiment suites and their artifacts (report.json, residuals.csv,
// plotdata/*.dat). docs/config.md and docs/report_schema.md describe the
// input and output formats.

#include <json.hpp>

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace mms::experiments {

/// Bad configuration or unknown experiment; the CLI maps it to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Flat map of "section.key" -> value text.
class Config {
 public:
  /// Parses "key = value" lines grouped under [section] headers.
  static Config from_file(const std::string& path);
  static Config from_string(const std::string& text);

  void set(const std::string& key, const std::string& value) { values_[key] = value; }
  bool has(const std::string& key) const { return values_.count(key) > 0; }

  std::string get(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key, double fallback) const;
  int get_int(const std::string& key, int fallback) const;

  /// params.seed, else MMS_SEED, else nullopt.
  std::optional<std::uint64_t> seed() const;
  /// Like seed() but throws ConfigError when neither is set.
  std::uint64_t require_seed() const;

  /// Sorted "key=value" lines.
  std::string canonical() const;
  /// FNV-1a 64 of canonical(), as 16 hex digits.
  std::string hash() const;
  const std::map<std::string, std::string>& values() const { return values_; }

 private:
  std::map<std::string, std::string> values_;
};

struct Assertion {
  std::string name;
  bool pass = false;
  double value = 0.0;
  double threshold = 0.0;
  std::string detail;
};

struct PlotSeries {
  std::string name;  // file stem under plotdata/
  std::string x_label, y_label;
  std::vector<double> x, y;
};

struct ExperimentResult {
  std::string experiment;
  std::vector<Assertion> assertions;
  std::vector<PlotSeries> plots;
  nlohmann::ordered_json details = nlohmann::ordered_json::object();
  bool pass() const;
};

using ExperimentFn = std::function<ExperimentResult(const Config&)>;

struct ExperimentInfo {
  std::string summary;
  bool randomized = false;
  ExperimentFn run;
};

/// Registry ordered by name.
const std::map<std::string, ExperimentInfo>& registry();
std::vector<std::string> list_experiments();

/// Throws ConfigError for unknown names, missing seeds and malformed values.
ExperimentResult run_experiment(const std::string& name, const Config& config);

nlohmann::ordered_json report_json(const Config& config, const ExperimentResult& result);

/// Writes report.json, residuals.csv and plotdata/<name>.dat under dir.
void write_artifacts(const std::string& dir, const Config& config, const ExperimentResult& result);

}  // namespace mms::experiments
