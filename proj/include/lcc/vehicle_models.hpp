#pragma once

#include <functional>

namespace lcc {

/// Optimal-velocity-model parameters of a single human driver.
///
/// `delay` is a reaction time used only by the nonlinear simulator; the
/// linear analysis is delay-free.
struct DriverParams {
  double alpha = 0.6;   // 1/s
  double beta = 0.9;    // 1/s
  double v_max = 30.0;  // m/s
  double s_st = 5.0;    // m
  double s_go = 35.0;   // m
  double delay = 0.0;   // s

  /// Throws DomainError unless alpha > 0, beta > 0, v_max > 0,
  /// 0 <= s_st < s_go and delay >= 0.
  void validate() const;

  friend bool operator==(const DriverParams&, const DriverParams&) = default;
};

struct Equilibrium {
  double v_star = 0.0;  // m/s
  double s_star = 0.0;  // m

  friend bool operator==(const Equilibrium&, const Equilibrium&) = default;
};

/// First-order car-following coefficients around an equilibrium:
///   d/dt s~ = v~_prev - v~,  d/dt v~ = alpha1 s~ - alpha2 v~ + alpha3 v~_prev.
/// Construction enforces alpha1 > 0 and alpha2 > alpha3 > 0.
class LinearCoeffs {
 public:
  LinearCoeffs(double alpha1, double alpha2, double alpha3,
               Equilibrium equilibrium = {});

  double alpha1() const noexcept { return alpha1_; }
  double alpha2() const noexcept { return alpha2_; }
  double alpha3() const noexcept { return alpha3_; }
  const Equilibrium& equilibrium() const noexcept { return equilibrium_; }

  friend bool operator==(const LinearCoeffs&, const LinearCoeffs&) = default;

 private:
  double alpha1_;
  double alpha2_;
  double alpha3_;
  Equilibrium equilibrium_;
};

/// Spacing-dependent desired velocity V(s): 0 below s_st, v_max above s_go and
/// the cosine ramp (v_max / 2)(1 - cos(pi (s - s_st) / (s_go - s_st))) between.
double desired_velocity(double spacing, const DriverParams& p);

/// dV/ds. Zero outside the open ramp (s_st, s_go).
double desired_velocity_slope(double spacing, const DriverParams& p);

/// OVM acceleration alpha (V(s) - v) + beta * s_dot.
double ovm_acceleration(double spacing, double spacing_rate, double velocity,
                        const DriverParams& p);

/// Spacing at which V(s) equals `v_star`, via the closed-form inverse of the
/// cosine ramp. v_star = 0 maps to s_st and v_star = v_max maps to s_go.
Equilibrium equilibrium_spacing(double v_star, const DriverParams& p);

/// Bisection inverse for any continuous nondecreasing profile on
/// [s_lo, s_hi]. Returns the smallest spacing with profile(s) >= target
/// (within `tol` in spacing).
double invert_monotone_profile(const std::function<double(double)>& profile,
                               double target, double s_lo, double s_hi,
                               double tol = 1e-13);

/// Same contract as equilibrium_spacing but solved by bisection on
/// desired_velocity; used as a cross-check and for alternative profiles.
Equilibrium equilibrium_spacing_bisect(double v_star, const DriverParams& p);

/// alpha1 = alpha * V'(s*), alpha2 = alpha + beta, alpha3 = beta.
/// Requires s_st < s* < s_go; saturated equilibria would give alpha1 = 0.
LinearCoeffs linearize(const Equilibrium& eq, const DriverParams& p);

}  // namespace lcc
