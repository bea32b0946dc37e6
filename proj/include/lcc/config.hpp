#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "lcc/ctrl_analysis.hpp"
#include "lcc/string_stability.hpp"
#include "lcc/traffic_sim.hpp"

namespace lcc {

inline constexpr int kSchemaVersion = 1;

struct AnalysisSettings {
  double rank_tol = kDefaultRankTol;
  /// Measured follower for observability; 0 selects the tail vehicle n.
  int output_k = 0;
  double gramian_dt = kDefaultGramianStep;  // s
  std::vector<int> energy_n{1, 2, 3, 4, 5};
  std::vector<double> energy_t{10.0, 20.0, 30.0};  // s

  friend bool operator==(const AnalysisSettings&, const AnalysisSettings&) = default;
};

struct ScanSettings {
  GainAxis axis1{-1, GainKind::Mu, -10.0, 10.0, 101};
  GainAxis axis2{-1, GainKind::K, -10.0, 10.0, 101};

  friend bool operator==(const ScanSettings&, const ScanSettings&) = default;
};

struct MetricsWindow {
  double t_start = 20.0;  // s
  double t_end = 40.0;    // s

  friend bool operator==(const MetricsWindow&, const MetricsWindow&) = default;
};

/// Everything a single CLI invocation can be configured with.
struct RunConfiguration {
  ScenarioConfig scenario;
  AnalysisSettings analysis;
  FrequencyGrid frequency;
  ScanSettings scan;
  MetricsWindow metrics;

  friend bool operator==(const RunConfiguration&, const RunConfiguration&) = default;
};

/// One documented configuration key.
struct ConfigKey {
  std::string key;
  std::string units;
  std::string default_value;
  std::string description;
};
const std::vector<ConfigKey>& config_keys();

/// Validates a JSON document against the schema and fills defaults. Throws
/// ConfigError naming the JSON path of the first offending key.
RunConfiguration parse_config(const nlohmann::json& doc);
RunConfiguration load_config(const std::filesystem::path& path);
nlohmann::json to_json(const RunConfiguration& cfg);

/// Applies "dotted.key=value" to a document. The value is read as JSON when it
/// parses and as a string otherwise.
void apply_override(nlohmann::json& doc, const std::string& assignment);

/// Coefficients of the base driver at the configured v*.
LinearCoeffs coefficients(const RunConfiguration& cfg);
/// m, n, coefficients and controller gains as a transfer-function spec.
TransferSpec transfer_spec(const RunConfiguration& cfg);

}  // namespace lcc
