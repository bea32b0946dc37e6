#include "lcc/vehicle_models.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "lcc/errors.hpp"

namespace lcc {

namespace {

void require_nonnegative_spacing(double spacing) {
  if (!(spacing >= 0.0)) {
    std::ostringstream msg;
    msg << "spacing must be >= 0, got " << spacing;
    throw DomainError(msg.str());
  }
}

void require_velocity_in_range(double v_star, const DriverParams& p) {
  if (!(v_star >= 0.0 && v_star <= p.v_max)) {
    std::ostringstream msg;
    msg << "equilibrium velocity " << v_star << " outside [0, " << p.v_max << "]";
    throw DomainError(msg.str());
  }
}

}  // namespace

void DriverParams::validate() const {
  auto fail = [](const char* what) { throw DomainError(what); };
  if (!(alpha > 0.0)) fail("DriverParams: alpha must be > 0");
  if (!(beta > 0.0)) fail("DriverParams: beta must be > 0");
  if (!(v_max > 0.0)) fail("DriverParams: v_max must be > 0");
  if (!(s_st >= 0.0)) fail("DriverParams: s_st must be >= 0");
  if (!(s_st < s_go)) fail("DriverParams: s_st must be < s_go");
  if (!(delay >= 0.0)) fail("DriverParams: delay must be >= 0");
}

LinearCoeffs::LinearCoeffs(double alpha1, double alpha2, double alpha3,
                           Equilibrium equilibrium)
    : alpha1_(alpha1), alpha2_(alpha2), alpha3_(alpha3), equilibrium_(equilibrium) {
  if (!(alpha1 > 0.0) || !(alpha3 > 0.0) || !(alpha2 > alpha3)) {
    std::ostringstream msg;
    msg << "linear coefficients must satisfy alpha1 > 0 and alpha2 > alpha3 > 0, got ("
        << alpha1 << ", " << alpha2 << ", " << alpha3 << ")";
    throw DomainError(msg.str());
  }
}

double desired_velocity(double spacing, const DriverParams& p) {
  require_nonnegative_spacing(spacing);
  if (spacing <= p.s_st) return 0.0;
  if (spacing >= p.s_go) return p.v_max;
  const double phase = std::numbers::pi * (spacing - p.s_st) / (p.s_go - p.s_st);
  return 0.5 * p.v_max * (1.0 - std::cos(phase));
}

double desired_velocity_slope(double spacing, const DriverParams& p) {
  require_nonnegative_spacing(spacing);
  if (spacing <= p.s_st || spacing >= p.s_go) return 0.0;
  const double width = p.s_go - p.s_st;
  const double phase = std::numbers::pi * (spacing - p.s_st) / width;
  return 0.5 * p.v_max * std::numbers::pi / width * std::sin(phase);
}

double ovm_acceleration(double spacing, double spacing_rate, double velocity,
                        const DriverParams& p) {
  return p.alpha * (desired_velocity(spacing, p) - velocity) + p.beta * spacing_rate;
}

Equilibrium equilibrium_spacing(double v_star, const DriverParams& p) {
  require_velocity_in_range(v_star, p);
  if (v_star == 0.0) return {v_star, p.s_st};
  if (v_star == p.v_max) return {v_star, p.s_go};
  const double phase = std::acos(1.0 - 2.0 * v_star / p.v_max);
  return {v_star, p.s_st + (p.s_go - p.s_st) * phase / std::numbers::pi};
}

double invert_monotone_profile(const std::function<double(double)>& profile,
                               double target, double s_lo, double s_hi, double tol) {
  if (!(s_lo <= s_hi)) throw DomainError("bisection bracket is empty");
  if (profile(s_lo) >= target) return s_lo;
  if (profile(s_hi) < target) throw DomainError("target above profile range");
  // Invariant: profile(lo) < target <= profile(hi).
  double lo = s_lo;
  double hi = s_hi;
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (profile(mid) < target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return hi;
}

Equilibrium equilibrium_spacing_bisect(double v_star, const DriverParams& p) {
  require_velocity_in_range(v_star, p);
  if (v_star == 0.0) return {v_star, p.s_st};
  const double s = invert_monotone_profile(
      [&p](double x) { return desired_velocity(x, p); }, v_star, p.s_st, p.s_go);
  return {v_star, s};
}

LinearCoeffs linearize(const Equilibrium& eq, const DriverParams& p) {
  p.validate();
  if (!(eq.s_star > p.s_st && eq.s_star < p.s_go)) {
    std::ostringstream msg;
    msg << "cannot linearize at saturated equilibrium s*=" << eq.s_star
        << " (need " << p.s_st << " < s* < " << p.s_go << ")";
    throw DomainError(msg.str());
  }
  const double alpha1 = p.alpha * desired_velocity_slope(eq.s_star, p);
  return LinearCoeffs(alpha1, p.alpha + p.beta, p.beta, eq);
}

}  // namespace lcc
