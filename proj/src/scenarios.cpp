#include "lcc/scenarios.hpp"

namespace lcc {

namespace {

constexpr double kStudySpeed = 15.0;

}  // namespace

LinearCoeffs default_coeffs() {
  const DriverParams p;
  return linearize(equilibrium_spacing(kStudySpeed, p), p);
}

TransferSpec ladder_spec(const std::string& case_name) {
  TransferSpec spec;
  spec.m = 2;
  spec.n = 2;
  spec.coeffs = default_coeffs();
  spec.gains = table1_gains(case_name);
  return spec;
}

ScenarioConfig sinusoid_scenario(const std::string& case_name) {
  ScenarioConfig cfg;
  cfg.variant = SystemVariant::GeneralLCC;
  cfg.m = 2;
  cfg.n = 2;
  cfg.v_star = kStudySpeed;
  cfg.horizon = 60.0;
  cfg.perturbation = HeadSinusoid{};
  cfg.cav.mode = ControllerMode::HdvBaseline;
  cfg.cav.gains = table1_gains(case_name);
  return cfg;
}

std::string to_string(BrakeController c) {
  switch (c) {
    case BrakeController::LookingAhead: return "looking_ahead";
    case BrakeController::FdLcc: return "fd_lcc";
    case BrakeController::CfLcc: return "cf_lcc";
  }
  return "?";
}

ScenarioConfig brake_scenario(BrakeController controller,
                              std::optional<HeterogeneitySpec> heterogeneity, std::uint64_t seed) {
  ScenarioConfig cfg;
  cfg.variant = controller == BrakeController::FdLcc ? SystemVariant::FD_LCC
                                                     : SystemVariant::CF_LCC;
  cfg.m = 0;
  cfg.n = 10;
  cfg.v_star = kStudySpeed;
  cfg.horizon = 40.0;
  cfg.perturbation = FollowerBrake{};
  cfg.heterogeneity = heterogeneity;
  cfg.seed = seed;
  cfg.cav.mode = ControllerMode::ExplicitLinear;
  if (controller != BrakeController::LookingAhead) {
    cfg.cav.gains.set(0, controller == BrakeController::CfLcc ? 0.1 : 0.0, -0.5);
    cfg.cav.gains.set(1, -0.2, 0.05);
    cfg.cav.gains.set(2, -0.1, 0.05);
  }
  return cfg;
}

BrakeMetrics brake_metrics(const SimulationTrace& trace) {
  const auto fleet = cav_and_followers(10);
  return {aave(trace, 20.0, 40.0, kStudySpeed, fleet), total_fuel(trace, 20.0, 40.0, fleet)};
}

BrakeComparison compare_brake_controllers(std::optional<HeterogeneitySpec> heterogeneity,
                                          std::uint64_t seed) {
  BrakeComparison out;
  out.looking_ahead =
      brake_metrics(simulate(brake_scenario(BrakeController::LookingAhead, heterogeneity, seed)));
  out.fd = brake_metrics(simulate(brake_scenario(BrakeController::FdLcc, heterogeneity, seed)));
  out.cf = brake_metrics(simulate(brake_scenario(BrakeController::CfLcc, heterogeneity, seed)));
  return out;
}

}  // namespace lcc
