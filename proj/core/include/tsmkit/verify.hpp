#pragma once

// Named verification suites with per-case records and JSON / CSV reports.

#include "tsmkit/io.hpp"
#include "tsmkit/quadrature.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace tsmkit {

const std::vector<std::string>& suite_names();

struct SuiteConfig {
  std::string suite;
  /// Each entry is a builtin name, a file path or an inline group object.
  /// Empty means the suite's default groups.
  std::vector<json> groups;
  std::vector<RVec> lambdas;
  std::optional<QuadratureRule> quad;
  std::optional<double> tol;
  std::uint64_t seed = 0;
  int cases = 0;  // 0 = suite default
  json params = json::object();
  std::string output;
  std::string base_dir;  // relative group paths are resolved against this

  /// Keys: suite, group (string | object | list), lambda (list or list of lists),
  /// quad, tol, seed, cases, params, output. Unknown keys are rejected.
  static SuiteConfig from_json(const json& j, const std::string& base_dir = "");
  static SuiteConfig from_file(const std::string& path);
};

struct CaseRecord {
  CaseRecord() = default;
  CaseRecord(std::string k, bool is_control = false) : key(std::move(k)), control(is_control) {}

  std::string key;
  /// Negative controls are expected to fail; the suite fails if one passes.
  bool control = false;
  json inputs = json::object();
  json values = json::object();
  std::optional<double> residual;  // empty when the case threw
  double tolerance = 0.0;
  bool pass = false;               // the check itself succeeded
  std::string error;

  bool ok() const { return control ? !pass : pass; }
};

struct SuiteReport {
  std::string suite;
  json provenance = json::object();
  std::vector<CaseRecord> records;  // sorted by key
  double wall_seconds = 0.0;

  int case_count() const;
  int cases_passed() const;
  int control_count() const;
  int controls_failed_as_expected() const;
  double worst_residual() const;  // over non-control cases
  bool pass() const;

  json to_json(bool include_timing = true) const;
  std::string to_csv() const;
};

/// Throws std::invalid_argument for an unknown suite name. Errors inside a case
/// are recorded on that case and never abort the suite.
SuiteReport run_suite(const SuiteConfig& config);

}  // namespace tsmkit
