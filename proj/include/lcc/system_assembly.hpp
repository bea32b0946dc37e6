#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "lcc/vehicle_models.hpp"

namespace lcc {

/// Topologies of the linearized mixed-traffic chain. Vehicle 0 is the CAV,
/// vehicles -m..-1 drive ahead of it and 1..n follow it.
enum class SystemVariant {
  GeneralLCC,  // m >= 1 HDVs ahead, n >= 1 HDVs behind
  CF_LCC,      // CAV follows the head vehicle with HDV dynamics, n HDVs behind
  FD_LCC,      // CAV drives freely, n HDVs behind
  CCC,         // m HDVs ahead, nothing behind
};

std::string_view to_string(SystemVariant v);
/// Accepts "general", "cf", "fd", "ccc" (and the enum spellings).
SystemVariant parse_variant(std::string_view text);

/// Throws TopologyError if (m, n) is not admissible for `variant`.
void validate_topology(SystemVariant variant, int m, int n);

enum class StateKind {
  Spacing,          // s~_i
  Velocity,         // v~_i
  NegatedPosition,  // -p_0 of the free-driving CAV
};

struct StateSlot {
  int vehicle;
  StateKind kind;
  friend bool operator==(const StateSlot&, const StateSlot&) = default;
};

/// Two states per vehicle, ordered front to back: [first, v~] for vehicles
/// -m, ..., 0, ..., n.
class StateIndexMap {
 public:
  StateIndexMap() = default;
  StateIndexMap(SystemVariant variant, int m, int n);

  int dim() const noexcept { return static_cast<int>(slots_.size()); }
  int first_vehicle() const noexcept { return -m_; }
  int last_vehicle() const noexcept { return n_; }
  bool contains(int vehicle) const noexcept { return vehicle >= -m_ && vehicle <= n_; }

  /// Row of s~_i (or -p_0 for the free-driving CAV).
  int spacing_row(int vehicle) const;
  int velocity_row(int vehicle) const;
  int row(StateSlot slot) const;
  const StateSlot& slot(int row) const;

 private:
  int m_ = 0;
  int n_ = 0;
  std::vector<StateSlot> slots_;
};

struct StateSpaceModel {
  SystemVariant variant = SystemVariant::FD_LCC;
  int m = 0;
  int n = 0;
  Eigen::MatrixXd A;
  Eigen::VectorXd B;
  std::optional<Eigen::VectorXd> H;  // head-vehicle input; absent for FD_LCC
  StateIndexMap index;
  LinearCoeffs coeffs{1.0, 2.0, 1.0};

  int dim() const noexcept { return static_cast<int>(A.rows()); }
};

/// Static feedback gains of the CAV: mu multiplies s~_i and k multiplies v~_i.
/// A missing id means a zero gain.
struct FeedbackGains {
  std::map<int, double> mu;
  std::map<int, double> k;

  double mu_of(int vehicle) const;
  double k_of(int vehicle) const;
  void set(int vehicle, double mu_gain, double k_gain);
  /// Sorted union of ids carrying a gain entry.
  std::vector<int> ids() const;
  bool empty() const noexcept { return mu.empty() && k.empty(); }

  friend bool operator==(const FeedbackGains&, const FeedbackGains&) = default;
};

/// Gain setups A-D (and "HDV") of the two-ahead/two-behind study.
FeedbackGains table1_gains(std::string_view case_name);
std::vector<std::string> table1_case_names();

StateSpaceModel build_system(SystemVariant variant, int m, int n, const LinearCoeffs& c);

/// Row vector K of the CAV input u = K x.
///
/// GeneralLCC/CCC: K carries the HDV-like baseline (alpha1 on s~_0, -alpha2 on
/// v~_0, alpha3 on v~_-1) plus mu_i, k_i at vehicle i.
/// CF_LCC: the baseline already lives in A_c, so K carries the gains only.
/// FD_LCC: gains only; id 0 is allowed and mu_0 multiplies the -p_0 state.
/// CF_LCC also accepts id 0 (self feedback on s~_0, v~_0).
Eigen::RowVectorXd feedback_row(const StateSpaceModel& model, const FeedbackGains& gains);

/// A + B K with K from feedback_row.
Eigen::MatrixXd closed_loop_matrix(const StateSpaceModel& model, const FeedbackGains& gains);

}  // namespace lcc
