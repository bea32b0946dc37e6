#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "lcc/system_assembly.hpp"
#include "lcc/vehicle_models.hpp"

namespace lcc {

struct NoPerturbation {
  friend bool operator==(const NoPerturbation&, const NoPerturbation&) = default;
};

/// Head velocity v* + amplitude sin(2 pi (t - start) / period) for t >= start.
struct HeadSinusoid {
  double amplitude = 2.0;  // m/s
  double period = 10.0;    // s
  double start = 20.0;     // s
  friend bool operator==(const HeadSinusoid&, const HeadSinusoid&) = default;
};

/// Vehicle `vehicle` is forced to accelerate at `decel` during
/// [start, start + duration).
struct FollowerBrake {
  int vehicle = 1;
  double decel = -5.0;    // m/s^2
  double duration = 1.0;  // s
  double start = 20.0;    // s
  friend bool operator==(const FollowerBrake&, const FollowerBrake&) = default;
};

using Perturbation = std::variant<NoPerturbation, HeadSinusoid, FollowerBrake>;

/// Uniform jitter half-widths around the base driver.
struct HeterogeneitySpec {
  double alpha_jitter = 0.1;   // 1/s
  double beta_jitter = 0.1;    // 1/s
  double s_go_jitter = 5.0;    // m
  double delay_base = 0.4;     // s
  double delay_jitter = 0.1;   // s
  friend bool operator==(const HeterogeneitySpec&, const HeterogeneitySpec&) = default;
};

enum class ControllerMode {
  /// alpha1 s~_0 - alpha2 v~_0 + alpha3 v~_-1 plus the gains.
  HdvBaseline,
  /// The gains alone; id 0 carries the CAV's own (s~_0 or -p~_0, v~_0) gains.
  ExplicitLinear,
};

struct CavController {
  ControllerMode mode = ControllerMode::HdvBaseline;
  FeedbackGains gains;
  friend bool operator==(const CavController&, const CavController&) = default;
};

inline constexpr double kAccelMax = 2.0;   // m/s^2
inline constexpr double kAccelMin = -5.0;  // m/s^2

struct ScenarioConfig {
  SystemVariant variant = SystemVariant::GeneralLCC;
  int m = 2;
  int n = 2;
  double v_star = 15.0;   // m/s
  double horizon = 40.0;  // s
  double dt = 0.01;       // s
  Perturbation perturbation = NoPerturbation{};
  DriverParams hdv_base;
  std::optional<HeterogeneitySpec> heterogeneity;
  /// Per-vehicle parameters replacing the base (or sampled) driver.
  std::map<int, DriverParams> hdv_overrides;
  CavController cav;
  std::uint64_t seed = 0;

  /// Throws DomainError/TopologyError on an inconsistent scenario.
  void validate() const;
  bool has_head() const noexcept { return variant != SystemVariant::FD_LCC; }
  int head_id() const noexcept { return -m - 1; }
  /// Resolved driver of every HDV id (-m..-1, 1..n).
  std::map<int, DriverParams> driver_params() const;
  std::size_t steps() const;

  friend bool operator==(const ScenarioConfig&, const ScenarioConfig&) = default;
};

struct TraceEvent {
  double t = 0.0;
  int vehicle = 0;
  std::string event;
};

/// Rows are time steps 0..steps, columns follow `vehicles` (head first when
/// present, then -m..n). Spacing of the head and of a free-driving CAV is NaN.
struct SimulationTrace {
  std::vector<double> times;
  std::vector<int> vehicles;
  Eigen::MatrixXd pos;
  Eigen::MatrixXd vel;
  Eigen::MatrixXd acc;
  Eigen::MatrixXd spacing;
  std::vector<TraceEvent> events;
  double dt = 0.0;

  int column(int vehicle) const;
  /// Header t,vehicle,pos,vel,acc,spacing; blank spacing where undefined.
  void write_csv(std::ostream& out) const;
  /// Header t,vehicle,event.
  void write_events_csv(std::ostream& out) const;
};

/// Forward-Euler run of the nonlinear chain. Throws CollisionError when a
/// spacing becomes nonpositive.
SimulationTrace simulate(const ScenarioConfig& cfg);

/// One driver per vehicle drawn with mt19937_64(seed): alpha, beta, s_go and
/// delay in that order, each uniform on base +/- jitter.
std::vector<DriverParams> sample_heterogeneous(const HeterogeneitySpec& spec,
                                               const DriverParams& base, int n_vehicles,
                                               std::uint64_t seed);

/// Instantaneous fuel consumption (mL/s).
double fuel_rate(double v, double a);

/// Trapezoidal integral of fuel_rate over [t_a, t_b], summed over `vehicles`.
double total_fuel(const SimulationTrace& trace, double t_a, double t_b,
                  const std::vector<int>& vehicles);

/// Mean over `vehicles` of the time-averaged |v - v_star| on [t_a, t_b].
double aave(const SimulationTrace& trace, double t_a, double t_b, double v_star,
            const std::vector<int>& vehicles);

/// Ids 0..n, the evaluation fleet of the braking study.
std::vector<int> cav_and_followers(int n);

}  // namespace lcc
