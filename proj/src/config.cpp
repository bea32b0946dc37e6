#include "lcc/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "lcc/csv_io.hpp"
#include "lcc/errors.hpp"

namespace lcc {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ConfigError("config " + (path.empty() ? std::string("/") : path) + ": " + what);
}

void require_object(const json& j, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object");
}

void check_keys(const json& j, const std::string& path, const std::set<std::string>& allowed) {
  require_object(j, path);
  for (const auto& [key, value] : j.items()) {
    if (!allowed.count(key)) fail(path + "/" + key, "unknown key");
  }
}

double get_number(const json& j, const std::string& key, const std::string& path, double fallback) {
  if (!j.contains(key)) return fallback;
  const json& v = j.at(key);
  if (!v.is_number()) fail(path + "/" + key, "expected a number");
  return v.get<double>();
}

long long get_integer(const json& j, const std::string& key, const std::string& path,
                      long long fallback) {
  if (!j.contains(key)) return fallback;
  const json& v = j.at(key);
  if (!v.is_number_integer()) fail(path + "/" + key, "expected an integer");
  return v.get<long long>();
}

int get_int(const json& j, const std::string& key, const std::string& path, int fallback) {
  const long long v = get_integer(j, key, path, fallback);
  if (v < -1000000 || v > 1000000) fail(path + "/" + key, "integer out of range");
  return static_cast<int>(v);
}

std::string get_string(const json& j, const std::string& key, const std::string& path,
                       const std::string& fallback) {
  if (!j.contains(key)) return fallback;
  const json& v = j.at(key);
  if (!v.is_string()) fail(path + "/" + key, "expected a string");
  return v.get<std::string>();
}

int parse_vehicle_id(const std::string& text, const std::string& path) {
  std::size_t used = 0;
  int id = 0;
  try {
    id = std::stoi(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (text.empty() || used != text.size()) fail(path, "vehicle id '" + text + "' is not an integer");
  return id;
}

DriverParams parse_driver(const json& j, const std::string& path, const DriverParams& base) {
  check_keys(j, path, {"alpha", "beta", "v_max", "s_st", "s_go", "delay"});
  DriverParams p = base;
  p.alpha = get_number(j, "alpha", path, p.alpha);
  p.beta = get_number(j, "beta", path, p.beta);
  p.v_max = get_number(j, "v_max", path, p.v_max);
  p.s_st = get_number(j, "s_st", path, p.s_st);
  p.s_go = get_number(j, "s_go", path, p.s_go);
  p.delay = get_number(j, "delay", path, p.delay);
  return p;
}

json driver_json(const DriverParams& p) {
  return {{"alpha", p.alpha}, {"beta", p.beta},   {"v_max", p.v_max},
          {"s_st", p.s_st},   {"s_go", p.s_go},   {"delay", p.delay}};
}

Perturbation parse_perturbation(const json& j, const std::string& path) {
  require_object(j, path);
  const std::string type = get_string(j, "type", path, "none");
  if (type == "none") {
    check_keys(j, path, {"type"});
    return NoPerturbation{};
  }
  if (type == "head_sinusoid") {
    check_keys(j, path, {"type", "amplitude", "period", "start"});
    HeadSinusoid p;
    p.amplitude = get_number(j, "amplitude", path, p.amplitude);
    p.period = get_number(j, "period", path, p.period);
    p.start = get_number(j, "start", path, p.start);
    return p;
  }
  if (type == "follower_brake") {
    check_keys(j, path, {"type", "vehicle", "decel", "duration", "start"});
    FollowerBrake p;
    p.vehicle = get_int(j, "vehicle", path, p.vehicle);
    p.decel = get_number(j, "decel", path, p.decel);
    p.duration = get_number(j, "duration", path, p.duration);
    p.start = get_number(j, "start", path, p.start);
    return p;
  }
  fail(path + "/type", "unknown perturbation type '" + type +
                           "' (none, head_sinusoid, follower_brake)");
}

json perturbation_json(const Perturbation& p) {
  if (const auto* s = std::get_if<HeadSinusoid>(&p)) {
    return {{"type", "head_sinusoid"}, {"amplitude", s->amplitude}, {"period", s->period},
            {"start", s->start}};
  }
  if (const auto* b = std::get_if<FollowerBrake>(&p)) {
    return {{"type", "follower_brake"}, {"vehicle", b->vehicle}, {"decel", b->decel},
            {"duration", b->duration}, {"start", b->start}};
  }
  return {{"type", "none"}};
}

FeedbackGains parse_gains(const json& j, const std::string& path) {
  require_object(j, path);
  FeedbackGains g;
  for (const auto& [key, value] : j.items()) {
    const std::string p = path + "/" + key;
    const int id = parse_vehicle_id(key, p);
    check_keys(value, p, {"mu", "k"});
    g.set(id, get_number(value, "mu", p, 0.0), get_number(value, "k", p, 0.0));
  }
  return g;
}

json gains_json(const FeedbackGains& g) {
  json out = json::object();
  for (int id : g.ids()) out[std::to_string(id)] = {{"mu", g.mu_of(id)}, {"k", g.k_of(id)}};
  return out;
}

GainAxis parse_axis(const json& j, const std::string& path, const GainAxis& fallback) {
  check_keys(j, path, {"gain", "lo", "hi", "resolution"});
  GainAxis axis = fallback;
  if (j.contains("gain")) {
    try {
      const GainAxis named = parse_gain_axis(get_string(j, "gain", path, ""));
      axis.vehicle = named.vehicle;
      axis.kind = named.kind;
    } catch (const DomainError& e) {
      fail(path + "/gain", e.what());
    }
  }
  axis.lo = get_number(j, "lo", path, axis.lo);
  axis.hi = get_number(j, "hi", path, axis.hi);
  axis.resolution = get_int(j, "resolution", path, axis.resolution);
  return axis;
}

json axis_json(const GainAxis& a) {
  return {{"gain", a.label()}, {"lo", a.lo}, {"hi", a.hi}, {"resolution", a.resolution}};
}

template <typename T>
std::vector<T> parse_list(const json& j, const std::string& key, const std::string& path,
                          const std::vector<T>& fallback) {
  if (!j.contains(key)) return fallback;
  const json& v = j.at(key);
  const std::string p = path + "/" + key;
  if (!v.is_array()) fail(p, "expected an array");
  std::vector<T> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const json& e = v[i];
    if constexpr (std::is_integral_v<T>) {
      if (!e.is_number_integer()) fail(p + "/" + std::to_string(i), "expected an integer");
    } else {
      if (!e.is_number()) fail(p + "/" + std::to_string(i), "expected a number");
    }
    out.push_back(e.get<T>());
  }
  return out;
}

}  // namespace

const std::vector<ConfigKey>& config_keys() {
  static const std::vector<ConfigKey> keys = {
      {"schema_version", "-", "1", "config schema version (must be 1)"},
      {"variant", "-", "general", "topology: general, cf, fd or ccc"},
      {"m", "vehicles", "2 (0 for cf/fd)", "HDVs ahead of the CAV"},
      {"n", "vehicles", "2 (0 for ccc)", "HDVs behind the CAV"},
      {"v_star", "m/s", "15", "equilibrium velocity"},
      {"horizon", "s", "40", "simulation length"},
      {"dt", "s", "0.01", "Euler step"},
      {"seed", "-", "0", "seed of the heterogeneity sampler"},
      {"driver.alpha", "1/s", "0.6", "OVM headway-relaxation gain"},
      {"driver.beta", "1/s", "0.9", "OVM relative-velocity gain"},
      {"driver.v_max", "m/s", "30", "desired-velocity ceiling"},
      {"driver.s_st", "m", "5", "stop spacing of the desired-velocity profile"},
      {"driver.s_go", "m", "35", "free-flow spacing of the desired-velocity profile"},
      {"driver.delay", "s", "0", "HDV reaction delay"},
      {"heterogeneity", "-", "null", "object enabling random HDV parameters"},
      {"heterogeneity.alpha_jitter", "1/s", "0.1", "alpha half-width"},
      {"heterogeneity.beta_jitter", "1/s", "0.1", "beta half-width"},
      {"heterogeneity.s_go_jitter", "m", "5", "s_go half-width"},
      {"heterogeneity.delay_base", "s", "0.4", "mean reaction delay"},
      {"heterogeneity.delay_jitter", "s", "0.1", "reaction delay half-width"},
      {"driver_overrides.<id>.<driver key>", "as driver", "-", "per-HDV parameters"},
      {"perturbation.type", "-", "none", "none, head_sinusoid or follower_brake"},
      {"perturbation.amplitude", "m/s", "2", "head sinusoid amplitude"},
      {"perturbation.period", "s", "10", "head sinusoid period"},
      {"perturbation.start", "s", "20", "perturbation onset"},
      {"perturbation.vehicle", "id", "1", "braking vehicle"},
      {"perturbation.decel", "m/s^2", "-5", "forced braking acceleration"},
      {"perturbation.duration", "s", "1", "braking duration"},
      {"controller.mode", "-", "hdv_baseline", "hdv_baseline or explicit_linear"},
      {"controller.gains.<id>.mu", "1/s^2", "0", "feedback gain on s~_id (-p~_0 for fd id 0)"},
      {"controller.gains.<id>.k", "1/s", "0", "feedback gain on v~_id"},
      {"analysis.rank_tol", "-", "1e-8", "relative rank tolerance"},
      {"analysis.output_k", "id", "0 (= n)", "measured follower for observability"},
      {"analysis.gramian_dt", "s", "0.01", "Gramian RK4 step"},
      {"analysis.energy_n", "vehicles", "[1,2,3,4,5]", "chain lengths of the energy study"},
      {"analysis.energy_t", "s", "[10,20,30]", "horizons of the energy study"},
      {"frequency.omega_min", "rad/s", "0.01", "lowest grid frequency"},
      {"frequency.omega_max", "rad/s", "100", "highest grid frequency"},
      {"frequency.points", "-", "1000", "log-spaced grid points"},
      {"scan.axis1.gain", "-", "mu-1", "first scanned gain (mu<id> or k<id>)"},
      {"scan.axis1.lo", "gain units", "-10", "first axis lower bound"},
      {"scan.axis1.hi", "gain units", "10", "first axis upper bound"},
      {"scan.axis1.resolution", "cells", "101", "first axis points"},
      {"scan.axis2.*", "as axis1", "k-1, -10, 10, 101", "second scanned gain"},
      {"metrics.t_start", "s", "20", "start of the AAVE/fuel window"},
      {"metrics.t_end", "s", "40", "end of the AAVE/fuel window"},
  };
  return keys;
}

RunConfiguration parse_config(const json& doc) {
  check_keys(doc, "",
             {"schema_version", "variant", "m", "n", "v_star", "horizon", "dt", "seed", "driver",
              "heterogeneity", "driver_overrides", "perturbation", "controller", "analysis",
              "frequency", "scan", "metrics"});
  RunConfiguration cfg;
  const long long version = get_integer(doc, "schema_version", "", kSchemaVersion);
  if (version != kSchemaVersion) {
    fail("/schema_version", "unsupported version " + std::to_string(version));
  }

  ScenarioConfig& sc = cfg.scenario;
  const std::string variant = get_string(doc, "variant", "", "general");
  try {
    sc.variant = parse_variant(variant);
  } catch (const Error& e) {
    fail("/variant", e.what());
  }
  const bool chain_only = sc.variant == SystemVariant::FD_LCC || sc.variant == SystemVariant::CF_LCC;
  sc.m = get_int(doc, "m", "", chain_only ? 0 : 2);
  sc.n = get_int(doc, "n", "", sc.variant == SystemVariant::CCC ? 0 : 2);
  sc.v_star = get_number(doc, "v_star", "", sc.v_star);
  sc.horizon = get_number(doc, "horizon", "", sc.horizon);
  sc.dt = get_number(doc, "dt", "", sc.dt);
  const long long seed = get_integer(doc, "seed", "", 0);
  if (seed < 0) fail("/seed", "expected a nonnegative integer");
  sc.seed = static_cast<std::uint64_t>(seed);

  if (doc.contains("driver")) sc.hdv_base = parse_driver(doc.at("driver"), "/driver", DriverParams{});
  if (doc.contains("heterogeneity") && !doc.at("heterogeneity").is_null()) {
    const json& h = doc.at("heterogeneity");
    const std::string p = "/heterogeneity";
    check_keys(h, p, {"alpha_jitter", "beta_jitter", "s_go_jitter", "delay_base", "delay_jitter"});
    HeterogeneitySpec spec;
    spec.alpha_jitter = get_number(h, "alpha_jitter", p, spec.alpha_jitter);
    spec.beta_jitter = get_number(h, "beta_jitter", p, spec.beta_jitter);
    spec.s_go_jitter = get_number(h, "s_go_jitter", p, spec.s_go_jitter);
    spec.delay_base = get_number(h, "delay_base", p, spec.delay_base);
    spec.delay_jitter = get_number(h, "delay_jitter", p, spec.delay_jitter);
    sc.heterogeneity = spec;
  }
  if (doc.contains("driver_overrides")) {
    const json& o = doc.at("driver_overrides");
    require_object(o, "/driver_overrides");
    for (const auto& [key, value] : o.items()) {
      const std::string p = "/driver_overrides/" + key;
      sc.hdv_overrides[parse_vehicle_id(key, p)] = parse_driver(value, p, sc.hdv_base);
    }
  }
  if (doc.contains("perturbation")) {
    sc.perturbation = parse_perturbation(doc.at("perturbation"), "/perturbation");
  }
  if (doc.contains("controller")) {
    const json& c = doc.at("controller");
    check_keys(c, "/controller", {"mode", "gains"});
    const std::string mode = get_string(c, "mode", "/controller", "hdv_baseline");
    if (mode == "hdv_baseline") {
      sc.cav.mode = ControllerMode::HdvBaseline;
    } else if (mode == "explicit_linear") {
      sc.cav.mode = ControllerMode::ExplicitLinear;
    } else {
      fail("/controller/mode", "unknown mode '" + mode + "' (hdv_baseline, explicit_linear)");
    }
    if (c.contains("gains")) sc.cav.gains = parse_gains(c.at("gains"), "/controller/gains");
  }

  if (doc.contains("analysis")) {
    const json& a = doc.at("analysis");
    const std::string p = "/analysis";
    check_keys(a, p, {"rank_tol", "output_k", "gramian_dt", "energy_n", "energy_t"});
    AnalysisSettings& s = cfg.analysis;
    s.rank_tol = get_number(a, "rank_tol", p, s.rank_tol);
    s.output_k = get_int(a, "output_k", p, s.output_k);
    s.gramian_dt = get_number(a, "gramian_dt", p, s.gramian_dt);
    s.energy_n = parse_list<int>(a, "energy_n", p, s.energy_n);
    s.energy_t = parse_list<double>(a, "energy_t", p, s.energy_t);
  }
  if (doc.contains("frequency")) {
    const json& f = doc.at("frequency");
    const std::string p = "/frequency";
    check_keys(f, p, {"omega_min", "omega_max", "points"});
    cfg.frequency.omega_min = get_number(f, "omega_min", p, cfg.frequency.omega_min);
    cfg.frequency.omega_max = get_number(f, "omega_max", p, cfg.frequency.omega_max);
    cfg.frequency.points = get_int(f, "points", p, cfg.frequency.points);
  }
  if (doc.contains("scan")) {
    const json& s = doc.at("scan");
    check_keys(s, "/scan", {"axis1", "axis2"});
    if (s.contains("axis1")) cfg.scan.axis1 = parse_axis(s.at("axis1"), "/scan/axis1", cfg.scan.axis1);
    if (s.contains("axis2")) cfg.scan.axis2 = parse_axis(s.at("axis2"), "/scan/axis2", cfg.scan.axis2);
  }
  if (doc.contains("metrics")) {
    const json& mt = doc.at("metrics");
    check_keys(mt, "/metrics", {"t_start", "t_end"});
    cfg.metrics.t_start = get_number(mt, "t_start", "/metrics", cfg.metrics.t_start);
    cfg.metrics.t_end = get_number(mt, "t_end", "/metrics", cfg.metrics.t_end);
  }
  return cfg;
}

RunConfiguration load_config(const std::filesystem::path& path) {
  const std::string text = io::read_file(path);
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("config " + path.string() + ": malformed JSON: " + e.what());
  }
  return parse_config(doc);
}

json to_json(const RunConfiguration& cfg) {
  const ScenarioConfig& sc = cfg.scenario;
  json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["variant"] = std::string(to_string(sc.variant));
  doc["m"] = sc.m;
  doc["n"] = sc.n;
  doc["v_star"] = sc.v_star;
  doc["horizon"] = sc.horizon;
  doc["dt"] = sc.dt;
  doc["seed"] = sc.seed;
  doc["driver"] = driver_json(sc.hdv_base);
  if (sc.heterogeneity) {
    const auto& h = *sc.heterogeneity;
    doc["heterogeneity"] = {{"alpha_jitter", h.alpha_jitter},
                            {"beta_jitter", h.beta_jitter},
                            {"s_go_jitter", h.s_go_jitter},
                            {"delay_base", h.delay_base},
                            {"delay_jitter", h.delay_jitter}};
  } else {
    doc["heterogeneity"] = nullptr;
  }
  json overrides = json::object();
  for (const auto& [id, p] : sc.hdv_overrides) overrides[std::to_string(id)] = driver_json(p);
  doc["driver_overrides"] = overrides;
  doc["perturbation"] = perturbation_json(sc.perturbation);
  doc["controller"] = {
      {"mode", sc.cav.mode == ControllerMode::HdvBaseline ? "hdv_baseline" : "explicit_linear"},
      {"gains", gains_json(sc.cav.gains)}};
  doc["analysis"] = {{"rank_tol", cfg.analysis.rank_tol},
                     {"output_k", cfg.analysis.output_k},
                     {"gramian_dt", cfg.analysis.gramian_dt},
                     {"energy_n", cfg.analysis.energy_n},
                     {"energy_t", cfg.analysis.energy_t}};
  doc["frequency"] = {{"omega_min", cfg.frequency.omega_min},
                      {"omega_max", cfg.frequency.omega_max},
                      {"points", cfg.frequency.points}};
  doc["scan"] = {{"axis1", axis_json(cfg.scan.axis1)}, {"axis2", axis_json(cfg.scan.axis2)}};
  doc["metrics"] = {{"t_start", cfg.metrics.t_start}, {"t_end", cfg.metrics.t_end}};
  return doc;
}

void apply_override(json& doc, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw ConfigError("override '" + assignment + "' must look like key=value");
  }
  const std::string key = assignment.substr(0, eq);
  const std::string text = assignment.substr(eq + 1);
  json value;
  try {
    value = json::parse(text);
  } catch (const json::parse_error&) {
    value = text;
  }
  if (!doc.is_object()) doc = json::object();
  json* node = &doc;
  std::stringstream parts(key);
  std::string part;
  std::vector<std::string> path;
  while (std::getline(parts, part, '.')) {
    if (part.empty()) throw ConfigError("override key '" + key + "' has an empty component");
    path.push_back(part);
  }
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    json& next = (*node)[path[i]];
    if (next.is_null()) next = json::object();
    if (!next.is_object()) {
      throw ConfigError("override key '" + key + "': '" + path[i] + "' is not an object");
    }
    node = &next;
  }
  (*node)[path.back()] = value;
}

LinearCoeffs coefficients(const RunConfiguration& cfg) {
  const auto& sc = cfg.scenario;
  return linearize(equilibrium_spacing(sc.v_star, sc.hdv_base), sc.hdv_base);
}

TransferSpec transfer_spec(const RunConfiguration& cfg) {
  TransferSpec spec;
  spec.m = cfg.scenario.m;
  spec.n = cfg.scenario.n;
  spec.coeffs = coefficients(cfg);
  spec.gains = cfg.scenario.cav.gains;
  spec.validate();
  return spec;
}

}  // namespace lcc
