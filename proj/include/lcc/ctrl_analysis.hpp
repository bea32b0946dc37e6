#pragma once

#include <complex>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "lcc/system_assembly.hpp"

namespace lcc {

/// Relative rank tolerance shared by the PBH and Krylov-rank tests.
inline constexpr double kDefaultRankTol = 1e-8;
/// Gramian integration step (s).
inline constexpr double kDefaultGramianStep = 0.01;

struct ControllabilityReport {
  bool controllable = false;
  /// Rank of [B, AB, ..., A^{dim-1} B].
  int controllable_dim = 0;
  /// Eigenvalues of A restricted to the complement of the controllable subspace.
  std::vector<std::complex<double>> uncontrollable_mode_eigenvalues;
  /// alpha1 - alpha2 alpha3 + alpha3^2, filled when the pair came from a model.
  std::optional<double> condition_value;
  /// Verdict of the per-eigenvalue rank test alone.
  bool pbh_controllable = false;
  /// Distinct eigenvalues (cluster means) at which [lambda I - A, B] lost rank.
  std::vector<std::complex<double>> pbh_deficient_eigenvalues;
  /// Orthonormal basis of the controllable subspace (dim x controllable_dim).
  Eigen::MatrixXd controllable_basis;
};

struct ObservabilityReport {
  bool observable = false;
  int observable_dim = 0;
  /// Vehicles with at least one state touching the unobservable subspace.
  /// Only filled by analyze_observability (needs a state map).
  std::vector<int> unobservable_vehicle_ids;
  /// Orthonormal basis of the unobservable subspace (dim x (dim - observable_dim)).
  Eigen::MatrixXd unobservable_basis;
};

struct GramianResult {
  Eigen::MatrixXd W;
  double t_horizon = 0.0;
  double lambda_min = 0.0;
  double lambda_max = 0.0;
  /// trace(W^{-1}); empty when lambda_min < 1e-12 lambda_max ("singular").
  std::optional<double> trace_inv;

  bool singular() const noexcept { return !trace_inv.has_value(); }
};

/// alpha1 - alpha2 alpha3 + alpha3^2. Nonzero is sufficient for the
/// free-driving and car-following chains to be controllable.
double condition_check(const LinearCoeffs& c);

/// PBH test at every distinct eigenvalue of A, cross-checked against the rank
/// of the controllability matrix. Throws NumericalError if the two verdicts
/// disagree or the eigensolver fails.
ControllabilityReport pbh_controllability(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                                          double tol = kDefaultRankTol);

/// Same, plus the condition value of the model's coefficients.
ControllabilityReport analyze_controllability(const StateSpaceModel& model,
                                              double tol = kDefaultRankTol);

/// Observability of (A, C) through controllability of (A^T, C^T).
ObservabilityReport pbh_observability(const Eigen::MatrixXd& A, const Eigen::MatrixXd& C,
                                      double tol = kDefaultRankTol);

ObservabilityReport analyze_observability(const StateSpaceModel& model, const Eigen::MatrixXd& C,
                                          double tol = kDefaultRankTol);

/// FD/CF: one row selecting v~_k. GeneralLCC: rows selecting s~_0, v~_0, v~_k.
/// Requires 1 <= k <= n.
Eigen::MatrixXd build_output_matrix(const StateSpaceModel& model, int k);

/// Rows selecting the CAV's own s~_0 and v~_0 (the CCC measurement set).
Eigen::MatrixXd own_state_output_matrix(const StateSpaceModel& model);

/// Finite-horizon controllability Gramian from RK4 integration of
/// dW/dt = A W + W A^T + B B^T, W(0) = 0.
GramianResult gramian(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B, double t,
                      double dt = kDefaultGramianStep);

/// Minimum input energy (x_tar - e^{At} x0)^T W(t)^{-1} (x_tar - e^{At} x0).
/// Throws SingularityError when W(t) is numerically singular.
double min_energy(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B, double t,
                  const Eigen::VectorXd& x0, const Eigen::VectorXd& x_tar,
                  double dt = kDefaultGramianStep);

struct EnergyRow {
  int n = 0;
  double t = 0.0;
  double lambda_min = 0.0;
  std::optional<double> trace_inv;
};

/// Gramian metrics of the FD-LCC (or CF-LCC) chain for every (n, t), ordered
/// by n then t.
std::vector<EnergyRow> energy_scaling_study(SystemVariant variant, const std::vector<int>& n_range,
                                            const std::vector<double>& t_list,
                                            const LinearCoeffs& c,
                                            double dt = kDefaultGramianStep);

}  // namespace lcc
