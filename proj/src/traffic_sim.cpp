#include "lcc/traffic_sim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>

#include "lcc/errors.hpp"

namespace lcc {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string fmt_g(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

std::size_t window_index(const SimulationTrace& trace, double t) {
  const double k = std::round(t / trace.dt);
  return static_cast<std::size_t>(k);
}

// Validates [t_a, t_b] against the trace and returns the index window; an
// empty or reversed window yields first == last.
std::pair<std::size_t, std::size_t> window(const SimulationTrace& trace, double t_a, double t_b) {
  if (trace.times.empty()) throw DomainError("empty trace");
  const double t_end = trace.times.back();
  const double slack = 1e-9 * std::max(1.0, t_end);
  if (t_a < -slack || t_b > t_end + slack || t_a > t_end + slack) {
    std::ostringstream msg;
    msg << "window [" << t_a << ", " << t_b << "] outside trace [0, " << t_end << "]";
    throw DomainError(msg.str());
  }
  if (t_b <= t_a) return {0, 0};
  return {window_index(trace, t_a), window_index(trace, t_b)};
}

}  // namespace

void ScenarioConfig::validate() const {
  validate_topology(variant, m, n);
  hdv_base.validate();
  if (!(dt > 0.0)) throw DomainError("dt must be > 0");
  if (!(horizon > 0.0)) throw DomainError("horizon must be > 0");
  if (steps() < 1) throw DomainError("horizon must span at least one step");
  if (!(v_star > 0.0 && v_star < hdv_base.v_max)) {
    throw DomainError("v_star must lie in (0, v_max)");
  }
  if (std::holds_alternative<HeadSinusoid>(perturbation)) {
    const auto& p = std::get<HeadSinusoid>(perturbation);
    if (!has_head()) throw TopologyError("fd scenario has no head vehicle to perturb");
    if (!(p.period > 0.0)) throw DomainError("sinusoid period must be > 0");
    if (!(p.amplitude >= 0.0)) throw DomainError("sinusoid amplitude must be >= 0");
    if (p.amplitude > v_star) throw DomainError("sinusoid amplitude would reverse the head");
    if (p.amplitude * 2.0 * std::numbers::pi / p.period > kAccelMax) {
      throw DomainError("sinusoid demands more than the 2 m/s^2 acceleration limit");
    }
    if (!(p.start >= 0.0 && p.start < horizon)) {
      throw DomainError("perturbation must start inside the horizon");
    }
  } else if (std::holds_alternative<FollowerBrake>(perturbation)) {
    const auto& p = std::get<FollowerBrake>(perturbation);
    if (p.vehicle < -m || p.vehicle > n) {
      std::ostringstream msg;
      msg << "braking vehicle " << p.vehicle << " outside [" << -m << ", " << n << "]";
      throw TopologyError(msg.str());
    }
    if (p.decel < kAccelMin || p.decel > kAccelMax) {
      throw DomainError("braking deceleration must lie in [-5, 2] m/s^2");
    }
    if (!(p.duration >= 0.0)) throw DomainError("braking duration must be >= 0");
    if (!(p.start >= 0.0 && p.start < horizon)) {
      throw DomainError("perturbation must start inside the horizon");
    }
  }
  for (const auto& [id, params] : hdv_overrides) {
    if (id == 0 || id < -m || id > n) {
      throw TopologyError("driver override for id " + std::to_string(id) + " which is not an HDV");
    }
    params.validate();
  }
  if (heterogeneity) {
    const auto& h = *heterogeneity;
    if (h.alpha_jitter < 0 || h.beta_jitter < 0 || h.s_go_jitter < 0 || h.delay_jitter < 0 ||
        h.delay_base < 0) {
      throw DomainError("heterogeneity widths and base delay must be >= 0");
    }
  }
  const bool explicit_mode = cav.mode == ControllerMode::ExplicitLinear;
  if (!explicit_mode && variant == SystemVariant::FD_LCC) {
    throw TopologyError("hdv_baseline needs a preceding vehicle; use explicit_linear for fd");
  }
  for (int id : cav.gains.ids()) {
    if (id < -m || id > n || (id == 0 && !explicit_mode)) {
      std::ostringstream msg;
      msg << "gain id " << id << " outside [" << -m << ", " << n << "]"
          << (id == 0 ? " (id 0 needs explicit_linear)" : "");
      throw TopologyError(msg.str());
    }
  }
  for (const auto& [id, params] : driver_params()) {
    params.validate();
    (void)equilibrium_spacing(v_star, params);
  }
  (void)linearize(equilibrium_spacing(v_star, hdv_base), hdv_base);
}

std::size_t ScenarioConfig::steps() const {
  const double k = std::round(horizon / dt);
  return k < 0 ? 0 : static_cast<std::size_t>(k);
}

std::map<int, DriverParams> ScenarioConfig::driver_params() const {
  std::vector<int> ids;
  for (int id = -m; id <= n; ++id) {
    if (id != 0) ids.push_back(id);
  }
  std::map<int, DriverParams> out;
  if (heterogeneity) {
    const auto drawn =
        sample_heterogeneous(*heterogeneity, hdv_base, static_cast<int>(ids.size()), seed);
    for (std::size_t i = 0; i < ids.size(); ++i) out[ids[i]] = drawn[i];
  } else {
    for (int id : ids) out[id] = hdv_base;
  }
  for (const auto& [id, params] : hdv_overrides) out[id] = params;
  return out;
}

int SimulationTrace::column(int vehicle) const {
  const auto it = std::find(vehicles.begin(), vehicles.end(), vehicle);
  if (it == vehicles.end()) {
    throw TopologyError("vehicle " + std::to_string(vehicle) + " is not in the trace");
  }
  return static_cast<int>(it - vehicles.begin());
}

void SimulationTrace::write_csv(std::ostream& out) const {
  out << "t,vehicle,pos,vel,acc,spacing\n";
  for (std::size_t k = 0; k < times.size(); ++k) {
    const auto r = static_cast<Eigen::Index>(k);
    for (std::size_t c = 0; c < vehicles.size(); ++c) {
      const auto j = static_cast<Eigen::Index>(c);
      out << fmt_g(times[k]) << ',' << vehicles[c] << ',' << fmt_g(pos(r, j)) << ','
          << fmt_g(vel(r, j)) << ',' << fmt_g(acc(r, j)) << ',';
      if (!std::isnan(spacing(r, j))) out << fmt_g(spacing(r, j));
      out << '\n';
    }
  }
}

void SimulationTrace::write_events_csv(std::ostream& out) const {
  out << "t,vehicle,event\n";
  for (const auto& e : events) out << fmt_g(e.t) << ',' << e.vehicle << ',' << e.event << '\n';
}

SimulationTrace simulate(const ScenarioConfig& cfg) {
  cfg.validate();
  const std::map<int, DriverParams> drivers = cfg.driver_params();
  const Equilibrium base_eq = equilibrium_spacing(cfg.v_star, cfg.hdv_base);
  const LinearCoeffs coeffs = linearize(base_eq, cfg.hdv_base);
  const bool head = cfg.has_head();
  const bool free_driving = cfg.variant == SystemVariant::FD_LCC;

  SimulationTrace tr;
  tr.dt = cfg.dt;
  if (head) tr.vehicles.push_back(cfg.head_id());
  for (int id = -cfg.m; id <= cfg.n; ++id) tr.vehicles.push_back(id);
  const int nv = static_cast<int>(tr.vehicles.size());
  const int off = head ? cfg.m + 1 : cfg.m;  // column of vehicle id 0
  auto col = [&](int id) { return id + off; };

  // Equilibrium spacing each vehicle is measured against.
  Eigen::VectorXd s_eq = Eigen::VectorXd::Constant(nv, kNaN);
  std::vector<int> delay_steps(static_cast<std::size_t>(nv), 0);
  for (const auto& [id, p] : drivers) {
    s_eq(col(id)) = equilibrium_spacing(cfg.v_star, p).s_star;
    delay_steps[static_cast<std::size_t>(col(id))] = static_cast<int>(std::round(p.delay / cfg.dt));
  }
  if (!free_driving) s_eq(col(0)) = base_eq.s_star;

  const std::size_t steps = cfg.steps();
  const auto rows = static_cast<Eigen::Index>(steps + 1);
  tr.times.resize(steps + 1);
  tr.pos.resize(rows, nv);
  tr.vel.resize(rows, nv);
  tr.acc.resize(rows, nv);
  tr.spacing.resize(rows, nv);

  Eigen::VectorXd p(nv);
  Eigen::VectorXd v = Eigen::VectorXd::Constant(nv, cfg.v_star);
  p(0) = 0.0;
  for (int c = 1; c < nv; ++c) p(c) = p(c - 1) - s_eq(c);
  const double p0_initial = p(col(0));

  const HeadSinusoid* sinusoid = std::get_if<HeadSinusoid>(&cfg.perturbation);
  const FollowerBrake* brake = std::get_if<FollowerBrake>(&cfg.perturbation);
  const auto sin_start = sinusoid ? static_cast<std::size_t>(std::llround(sinusoid->start / cfg.dt))
                                  : 0;
  std::size_t brake_begin = 0;
  std::size_t brake_end = 0;
  if (brake) {
    brake_begin = static_cast<std::size_t>(std::llround(brake->start / cfg.dt));
    brake_end = static_cast<std::size_t>(std::llround((brake->start + brake->duration) / cfg.dt));
  }
  auto head_velocity = [&](std::size_t k) {
    if (!sinusoid || k < sin_start) return cfg.v_star;
    const double t = static_cast<double>(k) * cfg.dt;
    return cfg.v_star +
           sinusoid->amplitude * std::sin(2.0 * std::numbers::pi * (t - sinusoid->start) /
                                          sinusoid->period);
  };
  auto head_accel = [&](std::size_t k) {
    if (!sinusoid || k < sin_start) return 0.0;
    const double t = static_cast<double>(k) * cfg.dt;
    const double w = 2.0 * std::numbers::pi / sinusoid->period;
    return sinusoid->amplitude * w * std::cos(w * (t - sinusoid->start));
  };
  if (head) v(0) = head_velocity(0);

  const FeedbackGains& gains = cfg.cav.gains;
  const std::vector<int> gain_ids = gains.ids();

  for (std::size_t k = 0; k <= steps; ++k) {
    const auto r = static_cast<Eigen::Index>(k);
    const double t = static_cast<double>(k) * cfg.dt;
    tr.times[k] = t;

    Eigen::VectorXd s = Eigen::VectorXd::Constant(nv, kNaN);
    for (int c = 1; c < nv; ++c) {
      if (free_driving && c == col(0)) continue;
      s(c) = p(c - 1) - p(c);
      if (!(s(c) > 0.0)) {
        std::ostringstream msg;
        msg << "collision at t=" << t << " s: vehicle " << tr.vehicles[static_cast<std::size_t>(c)]
            << " reached vehicle " << tr.vehicles[static_cast<std::size_t>(c - 1)]
            << " (spacing " << s(c) << " m)";
        throw CollisionError(msg.str(), t, tr.vehicles[static_cast<std::size_t>(c)],
                             tr.vehicles[static_cast<std::size_t>(c - 1)]);
      }
    }
    tr.pos.row(r) = p.transpose();
    tr.vel.row(r) = v.transpose();
    tr.spacing.row(r) = s.transpose();

    Eigen::VectorXd a = Eigen::VectorXd::Zero(nv);
    if (head) a(0) = head_accel(k);

    for (const auto& [id, drv] : drivers) {
      const int c = col(id);
      const int d = delay_steps[static_cast<std::size_t>(c)];
      double s_seen = s_eq(c);
      double v_seen = cfg.v_star;
      double v_lead_seen = cfg.v_star;
      if (k >= static_cast<std::size_t>(d)) {
        const auto rd = static_cast<Eigen::Index>(k) - d;
        s_seen = tr.spacing(rd, c);
        v_seen = tr.vel(rd, c);
        v_lead_seen = tr.vel(rd, c - 1);
      }
      // Reaction delay acts on the perceived gap and closing speed; the
      // driver's own speed in the relaxation term is current.
      a(c) = drv.alpha * (desired_velocity(s_seen, drv) - v(c)) +
             drv.beta * (v_lead_seen - v_seen);
    }

    const int c0 = col(0);
    double u = 0.0;
    if (cfg.cav.mode == ControllerMode::HdvBaseline) {
      u = coeffs.alpha1() * (s(c0) - s_eq(c0)) - coeffs.alpha2() * (v(c0) - cfg.v_star) +
          coeffs.alpha3() * (v(c0 - 1) - cfg.v_star);
    }
    for (int id : gain_ids) {
      const int c = col(id);
      double first = 0.0;
      if (id == 0 && free_driving) {
        first = -(p(c) - p0_initial - cfg.v_star * t);
      } else {
        first = s(c) - s_eq(c);
      }
      u += gains.mu_of(id) * first + gains.k_of(id) * (v(c) - cfg.v_star);
    }
    a(c0) = u;

    if (brake && k >= brake_begin && k < brake_end) a(col(brake->vehicle)) = brake->decel;

    if (!free_driving) {
      const double demand = (v(c0) * v(c0) - v(c0 - 1) * v(c0 - 1)) / (2.0 * s(c0));
      if (demand >= -kAccelMin) {
        a(c0) = kAccelMin;
        tr.events.push_back({t, 0, "safety_override"});
      }
    }
    for (int c = head ? 1 : 0; c < nv; ++c) a(c) = std::clamp(a(c), kAccelMin, kAccelMax);
    tr.acc.row(r) = a.transpose();

    if (k == steps) break;
    p += v * cfg.dt;
    for (int c = head ? 1 : 0; c < nv; ++c) v(c) = std::max(v(c) + a(c) * cfg.dt, 0.0);
    if (head) v(0) = head_velocity(k + 1);
    if (!v.allFinite() || !p.allFinite()) {
      throw NumericalError("non-finite state at t=" + fmt_g(t));
    }
  }
  return tr;
}

std::vector<DriverParams> sample_heterogeneous(const HeterogeneitySpec& spec,
                                               const DriverParams& base, int n_vehicles,
                                               std::uint64_t seed) {
  if (n_vehicles < 1) throw DomainError("need at least one vehicle to sample");
  std::mt19937_64 gen(seed);
  auto draw = [&](double center, double half_width) {
    std::uniform_real_distribution<double> u(center - half_width, center + half_width);
    return u(gen);
  };
  std::vector<DriverParams> out;
  out.reserve(static_cast<std::size_t>(n_vehicles));
  for (int i = 0; i < n_vehicles; ++i) {
    DriverParams p = base;
    p.alpha = draw(base.alpha, spec.alpha_jitter);
    p.beta = draw(base.beta, spec.beta_jitter);
    p.s_go = draw(base.s_go, spec.s_go_jitter);
    p.delay = std::max(0.0, draw(spec.delay_base, spec.delay_jitter));
    p.validate();
    out.push_back(p);
  }
  return out;
}

double fuel_rate(double v, double a) {
  if (v < 0.0) throw DomainError("fuel rate needs v >= 0");
  const double R = 0.333 + 0.00108 * v * v + 1.2 * a;
  if (R <= 0.0) return 0.444;
  double f = 0.444 + 0.09 * R * v;
  if (a > 0.0) f += 0.054 * a * a * v;
  return f;
}

double total_fuel(const SimulationTrace& trace, double t_a, double t_b,
                  const std::vector<int>& vehicles) {
  const auto [first, last] = window(trace, t_a, t_b);
  double total = 0.0;
  for (int id : vehicles) {
    const auto c = static_cast<Eigen::Index>(trace.column(id));
    for (std::size_t k = first; k < last; ++k) {
      const auto r = static_cast<Eigen::Index>(k);
      const double f0 = fuel_rate(trace.vel(r, c), trace.acc(r, c));
      const double f1 = fuel_rate(trace.vel(r + 1, c), trace.acc(r + 1, c));
      total += 0.5 * (f0 + f1) * (trace.times[k + 1] - trace.times[k]);
    }
  }
  return total;
}

double aave(const SimulationTrace& trace, double t_a, double t_b, double v_star,
            const std::vector<int>& vehicles) {
  const auto [first, last] = window(trace, t_a, t_b);
  if (first == last || vehicles.empty()) return 0.0;
  const double span = trace.times[last] - trace.times[first];
  double sum = 0.0;
  for (int id : vehicles) {
    const auto c = static_cast<Eigen::Index>(trace.column(id));
    double integral = 0.0;
    for (std::size_t k = first; k < last; ++k) {
      const auto r = static_cast<Eigen::Index>(k);
      integral += 0.5 *
                  (std::abs(trace.vel(r, c) - v_star) + std::abs(trace.vel(r + 1, c) - v_star)) *
                  (trace.times[k + 1] - trace.times[k]);
    }
    sum += integral / span;
  }
  return sum / static_cast<double>(vehicles.size());
}

std::vector<int> cav_and_followers(int n) {
  std::vector<int> ids;
  for (int i = 0; i <= n; ++i) ids.push_back(i);
  return ids;
}

}  // namespace lcc
