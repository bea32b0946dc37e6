#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "lcc/string_stability.hpp"
#include "lcc/traffic_sim.hpp"

namespace lcc {

/// Linear coefficients of the default driver at v* = 15 m/s.
LinearCoeffs default_coeffs();

/// Two HDVs ahead, two behind, Table-I style gains for `case_name`
/// ("HDV", "A".."D").
TransferSpec ladder_spec(const std::string& case_name);

/// m = n = 2 chain, head sinusoid from t = 20 s, 60 s horizon, CAV on the
/// HDV baseline plus the case gains.
ScenarioConfig sinusoid_scenario(const std::string& case_name);

enum class BrakeController {
  LookingAhead,  // CAV ignores the vehicles behind (zero input)
  FdLcc,         // -0.5 v~0 - 0.2 s~1 + 0.05 v~1 - 0.1 s~2 + 0.05 v~2, no vehicle ahead
  CfLcc,         // same plus 0.1 s~0, behind a head vehicle at v*
};
std::string to_string(BrakeController c);

/// Ten HDVs behind the CAV; vehicle 1 brakes at -5 m/s^2 for 1 s from
/// t = 20 s; 40 s horizon.
ScenarioConfig brake_scenario(BrakeController controller,
                              std::optional<HeterogeneitySpec> heterogeneity = std::nullopt,
                              std::uint64_t seed = 0);

struct BrakeMetrics {
  double aave = 0.0;  // m/s
  double fuel = 0.0;  // mL
};

/// AAVE and fuel of vehicles 0..10 over 20-40 s.
BrakeMetrics brake_metrics(const SimulationTrace& trace);

struct BrakeComparison {
  BrakeMetrics looking_ahead;
  BrakeMetrics fd;
  BrakeMetrics cf;

  /// 1 - controller / looking_ahead.
  static double reduction(double controller, double baseline) { return 1.0 - controller / baseline; }
};

BrakeComparison compare_brake_controllers(
    std::optional<HeterogeneitySpec> heterogeneity = std::nullopt, std::uint64_t seed = 0);

}  // namespace lcc
