#pragma once

#include <complex>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "lcc/system_assembly.hpp"

namespace lcc {

/// Chain of m HDVs ahead of the CAV and n behind, plus the CAV's gains.
/// Gain ids must lie in {-m..-1} and {1..n}.
struct TransferSpec {
  int m = 0;
  int n = 0;
  LinearCoeffs coeffs{1.0, 2.0, 1.0};
  FeedbackGains gains;

  void validate() const;
};

/// Log-spaced angular frequencies (rad/s).
struct FrequencyGrid {
  double omega_min = 1e-2;
  double omega_max = 1e2;
  int points = 1000;

  void validate() const;
  std::vector<double> omegas() const;

  friend bool operator==(const FrequencyGrid&, const FrequencyGrid&) = default;
};

/// phi(s) = alpha3 s + alpha1, gamma(s) = s^2 + alpha2 s + alpha1.
std::pair<std::complex<double>, std::complex<double>> phi_gamma(const LinearCoeffs& c,
                                                                std::complex<double> s);

/// H_i(s) = mu_i (gamma/phi - 1) + k_i s.
std::complex<double> gain_polynomial(const LinearCoeffs& c, double mu, double k,
                                     std::complex<double> s);

/// Closed-form head-to-tail response Gamma(j omega). Throws EvaluationError on
/// a pole at j omega and DomainError for omega <= 0.
std::complex<double> head_to_tail(const TransferSpec& spec, double omega);

/// Same expression at an arbitrary complex frequency s (used for symmetry
/// checks off the positive imaginary axis).
std::complex<double> head_to_tail_at(const TransferSpec& spec, std::complex<double> s);

/// Topology whose closed-loop state-space model realises a TransferSpec:
/// GeneralLCC for m, n >= 1, CCC for n = 0, CF_LCC for m = 0.
SystemVariant variant_for(int m, int n);

/// Closed-loop model matrices used by the frequency-response route.
struct ClosedLoop {
  StateSpaceModel model;
  Eigen::MatrixXd A_cl;
};
ClosedLoop closed_loop(const TransferSpec& spec);

/// Head-input to tail-velocity response e_tail^T (j omega I - A_cl)^{-1} H.
std::complex<double> state_space_response(const ClosedLoop& cl, double omega);
std::complex<double> state_space_response(const TransferSpec& spec, double omega);

/// Largest real part among the closed-loop eigenvalues.
double max_real_eigenvalue(const Eigen::MatrixXd& A);
inline constexpr double kAsymptoticTol = 1e-6;
inline constexpr double kStringMargin = 1e-9;

struct StringStabilityResult {
  bool stable = false;
  double peak_omega = 0.0;
  double peak_mag = 0.0;
  bool asymptotically_stable = false;
};

/// Peak of |Gamma| over the grid, refined by golden-section search around the
/// discrete maximum. stable means peak < 1 - margin.
StringStabilityResult is_string_stable(const TransferSpec& spec, const FrequencyGrid& grid = {},
                                       double margin = kStringMargin);

/// (omega, |Gamma(j omega)|) at every grid point.
std::vector<std::pair<double, double>> magnitude_curve(const TransferSpec& spec,
                                                       const FrequencyGrid& grid);

enum class GainKind { Mu, K };

struct GainAxis {
  int vehicle = 1;
  GainKind kind = GainKind::Mu;
  double lo = -10.0;
  double hi = 10.0;
  int resolution = 101;

  void validate() const;
  double value(int i) const;
  std::string label() const;  // e.g. "mu1", "k-2"

  friend bool operator==(const GainAxis&, const GainAxis&) = default;
};

/// Parses "mu1", "k-2", ... into vehicle and kind (range left untouched).
GainAxis parse_gain_axis(const std::string& text);

enum class RegionClass { StringStable, StringUnstable, AsympUnstable };
std::string_view to_string(RegionClass c);

struct RegionMap {
  GainAxis axis1;
  GainAxis axis2;
  /// Row-major: cell (i, j) at i * axis2.resolution + j, i along axis1.
  std::vector<RegionClass> cells;
  std::vector<std::string> diagnostics;

  RegionClass at(int i, int j) const;
  int count(RegionClass c) const;
  /// Columns axis1,axis2,class with class in {SS, SU, AU}.
  void write_csv(std::ostream& out) const;
};

RegionClass classify(const TransferSpec& spec, const FrequencyGrid& grid);

/// Overwrites the two axis gains of `base` cell by cell. Evaluation failures
/// mark the cell AsympUnstable and are recorded in diagnostics.
RegionMap scan_region(const TransferSpec& base, const GainAxis& axis1, const GainAxis& axis2,
                      const FrequencyGrid& grid = {});

}  // namespace lcc
