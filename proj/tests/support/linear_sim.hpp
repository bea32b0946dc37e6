// Nonlinear-versus-linear comparison for the head sinusoid scenario.
#pragma once

#include <cmath>
#include <numbers>

#include "lcc/scenarios.hpp"
#include "lcc/string_stability.hpp"
#include "oracles.hpp"

namespace oracle {

// Max over time and vehicles of |v~_nonlinear - v~_linear| when the head
// sinusoid has amplitude eps.
inline double linearization_error(const std::string& case_name, double eps) {
  lcc::ScenarioConfig cfg = lcc::sinusoid_scenario(case_name);
  auto& wave = std::get<lcc::HeadSinusoid>(cfg.perturbation);
  wave.amplitude = eps;
  const lcc::SimulationTrace trace = lcc::simulate(cfg);

  const lcc::ClosedLoop cl = lcc::closed_loop(lcc::ladder_spec(case_name));
  const int steps = static_cast<int>(trace.times.size()) - 1;
  const auto start = static_cast<int>(std::lround(wave.start / cfg.dt));
  auto head = [&](double t) {
    const int k = static_cast<int>(std::lround(t / cfg.dt));
    if (k < start) return 0.0;
    return eps * std::sin(2.0 * std::numbers::pi * (k * cfg.dt - wave.start) / wave.period);
  };
  const auto xs = euler_response(cl.A_cl, *cl.model.H, head, cfg.dt, steps);

  double worst = 0.0;
  for (int k = 0; k <= steps; ++k) {
    for (int id = -cfg.m; id <= cfg.n; ++id) {
      const double nonlinear = trace.vel(k, trace.column(id)) - cfg.v_star;
      const double linear = xs[static_cast<std::size_t>(k)](cl.model.index.velocity_row(id));
      worst = std::max(worst, std::abs(nonlinear - linear));
    }
  }
  return worst;
}

}  // namespace oracle
