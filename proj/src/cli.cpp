#include "lcc/cli.hpp"

#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "lcc/config.hpp"
#include "lcc/csv_io.hpp"
#include "lcc/errors.hpp"
#include "lcc/presets.hpp"

namespace lcc::cli {

namespace fs = std::filesystem;
using io::format_number;

namespace {

struct CommonOptions {
  std::string config_path;
  std::string out_dir;
  std::vector<std::string> overrides;
  std::optional<std::string> variant;
  std::optional<int> m;
  std::optional<int> n;
};

void add_common(CLI::App* cmd, CommonOptions& o) {
  cmd->add_option("-c,--config", o.config_path, "JSON config file")->check(CLI::ExistingFile);
  cmd->add_option("-o,--out", o.out_dir,
                  std::string("output directory (default $") + kOutputDirEnv + " or .)");
  cmd->add_option("--set", o.overrides, "override a config key, e.g. --set driver.alpha=0.7");
  cmd->add_option("--variant", o.variant, "topology: general, cf, fd, ccc");
  cmd->add_option("--m", o.m, "HDVs ahead of the CAV");
  cmd->add_option("--n", o.n, "HDVs behind the CAV");
}

RunConfiguration resolve(const CommonOptions& o) {
  nlohmann::json doc = nlohmann::json::object();
  if (!o.config_path.empty()) {
    try {
      doc = nlohmann::json::parse(io::read_file(o.config_path));
    } catch (const nlohmann::json::parse_error& e) {
      throw ConfigError("config " + o.config_path + ": malformed JSON: " + e.what());
    }
  }
  if (o.variant) doc["variant"] = *o.variant;
  if (o.m) doc["m"] = *o.m;
  if (o.n) doc["n"] = *o.n;
  for (const auto& s : o.overrides) apply_override(doc, s);
  return parse_config(doc);
}

fs::path output_dir(const CommonOptions& o) {
  if (!o.out_dir.empty()) return o.out_dir;
  if (const char* env = std::getenv(kOutputDirEnv); env && *env) return env;
  return ".";
}

std::string complex_text(std::complex<double> z) {
  std::ostringstream s;
  s << format_number(z.real());
  if (z.imag() != 0.0) s << (z.imag() > 0 ? "+" : "") << format_number(z.imag()) << "j";
  return s.str();
}

std::string bool_text(bool b) { return b ? "true" : "false"; }

void cmd_analyze(const CommonOptions& o, std::ostream& out) {
  const RunConfiguration cfg = resolve(o);
  const auto& sc = cfg.scenario;
  const StateSpaceModel model = build_system(sc.variant, sc.m, sc.n, coefficients(cfg));
  const ControllabilityReport r = analyze_controllability(model, cfg.analysis.rank_tol);
  char cond[32];
  std::snprintf(cond, sizeof cond, "%.4f", *r.condition_value);
  out << "controllable=" << bool_text(r.controllable) << " dim=" << r.controllable_dim
      << " condition=" << cond << '\n';
  out << "state_dim=" << model.dim() << " pbh_controllable=" << bool_text(r.pbh_controllable)
      << '\n';
  if (!r.uncontrollable_mode_eigenvalues.empty()) {
    out << "uncontrollable_modes=";
    for (std::size_t i = 0; i < r.uncontrollable_mode_eigenvalues.size(); ++i) {
      out << (i ? ";" : "") << complex_text(r.uncontrollable_mode_eigenvalues[i]);
    }
    out << '\n';
  }
  if (sc.n >= 1) {
    const int k = cfg.analysis.output_k == 0 ? sc.n : cfg.analysis.output_k;
    const ObservabilityReport ob =
        analyze_observability(model, build_output_matrix(model, k), cfg.analysis.rank_tol);
    out << "measured_k=" << k << " observable=" << bool_text(ob.observable)
        << " observable_dim=" << ob.observable_dim << " unobservable_vehicles=";
    for (std::size_t i = 0; i < ob.unobservable_vehicle_ids.size(); ++i) {
      out << (i ? ";" : "") << ob.unobservable_vehicle_ids[i];
    }
    out << '\n';
  }
}

void cmd_energy(const CommonOptions& o, std::ostream& out) {
  const RunConfiguration cfg = resolve(o);
  const auto rows = energy_scaling_study(cfg.scenario.variant, cfg.analysis.energy_n,
                                         cfg.analysis.energy_t, coefficients(cfg),
                                         cfg.analysis.gramian_dt);
  const fs::path path = output_dir(o) / "energy.csv";
  io::write_file_atomic(path, io::energy_csv(rows));
  for (const auto& r : rows) {
    out << "n=" << r.n << " t=" << format_number(r.t)
        << " lambda_min=" << format_number(r.lambda_min)
        << " trace_inv=" << (r.trace_inv ? format_number(*r.trace_inv) : "singular") << '\n';
  }
  out << "wrote " << path.string() << '\n';
}

void cmd_stability(const CommonOptions& o, std::ostream& out) {
  const RunConfiguration cfg = resolve(o);
  const TransferSpec spec = transfer_spec(cfg);
  const StringStabilityResult r = is_string_stable(spec, cfg.frequency);
  const fs::path path = output_dir(o) / "magnitude.csv";
  io::write_file_atomic(path, io::magnitude_csv(magnitude_curve(spec, cfg.frequency)));
  out << "stable=" << bool_text(r.stable) << " peak_omega=" << format_number(r.peak_omega)
      << " peak_mag=" << format_number(r.peak_mag)
      << " asymptotically_stable=" << bool_text(r.asymptotically_stable) << '\n';
  out << "wrote " << path.string() << '\n';
}

void cmd_scan(const CommonOptions& o, std::ostream& out, std::ostream& err) {
  const RunConfiguration cfg = resolve(o);
  const RegionMap map =
      scan_region(transfer_spec(cfg), cfg.scan.axis1, cfg.scan.axis2, cfg.frequency);
  const fs::path path = output_dir(o) / "region.csv";
  io::write_file_atomic(path, io::region_csv(map));
  for (const auto& d : map.diagnostics) err << "lcc: cell marked AU: " << d << '\n';
  out << "SS=" << map.count(RegionClass::StringStable)
      << " SU=" << map.count(RegionClass::StringUnstable)
      << " AU=" << map.count(RegionClass::AsympUnstable) << '\n';
  out << "wrote " << path.string() << '\n';
}

void cmd_simulate(const CommonOptions& o, std::ostream& out) {
  const RunConfiguration cfg = resolve(o);
  const SimulationTrace trace = simulate(cfg.scenario);
  const fs::path dir = output_dir(o);
  io::write_file_atomic(dir / "trace.csv", io::trace_csv(trace));
  io::write_file_atomic(dir / "events.csv", io::events_csv(trace));
  out << "steps=" << trace.times.size() << " safety_overrides=" << trace.events.size() << '\n';
  const double t_end = trace.times.back();
  if (cfg.metrics.t_start >= 0.0 && cfg.metrics.t_end <= t_end + 1e-9 &&
      cfg.metrics.t_end > cfg.metrics.t_start) {
    const auto fleet = cav_and_followers(cfg.scenario.n);
    out << "aave=" << format_number(aave(trace, cfg.metrics.t_start, cfg.metrics.t_end,
                                         cfg.scenario.v_star, fleet))
        << " fuel=" << format_number(total_fuel(trace, cfg.metrics.t_start, cfg.metrics.t_end,
                                                fleet))
        << '\n';
  }
  out << "wrote " << (dir / "trace.csv").string() << " and " << (dir / "events.csv").string()
      << '\n';
}

void cmd_reproduce(const std::string& preset, const CommonOptions& o, std::ostream& out) {
  const presets::Output result = presets::run(preset, output_dir(o));
  for (const auto& line : result.lines) out << line << '\n';
  for (const auto& f : result.files) out << "wrote " << f.string() << '\n';
}

std::string keys_footer() {
  std::ostringstream s;
  s << "\nConfig keys (JSON file via --config, or --set key=value):\n";
  for (const auto& k : config_keys()) {
    char line[256];
    std::snprintf(line, sizeof line, "  %-36s [%s] default %s: %s\n", k.key.c_str(),
                  k.units.c_str(), k.default_value.c_str(), k.description.c_str());
    s << line;
  }
  s << "\nPresets for `reproduce`:";
  for (const auto& n : presets::names()) s << ' ' << n;
  s << "\n\nExit codes: 0 ok, 1 internal, 2 usage, 3 config, 4 domain/topology, 5 numerical,\n"
       "6 collision, 7 I/O.\n";
  return s.str();
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Mixed-traffic leading cruise control analysis and simulation", "lcc"};
  app.require_subcommand(1);
  app.footer(keys_footer());

  CommonOptions analyze_o, energy_o, stability_o, scan_o, simulate_o, reproduce_o;
  std::string preset;
  auto* analyze = app.add_subcommand(
      "analyze", "controllability and observability of the linearized chain");
  add_common(analyze, analyze_o);
  auto* energy = app.add_subcommand("energy", "Gramian energy study over n and t (energy.csv)");
  add_common(energy, energy_o);
  auto* stability =
      app.add_subcommand("stability", "head-to-tail string stability (magnitude.csv)");
  add_common(stability, stability_o);
  auto* scan = app.add_subcommand("scan", "string-stable region over two gains (region.csv)");
  add_common(scan, scan_o);
  auto* sim = app.add_subcommand("simulate", "nonlinear simulation (trace.csv, events.csv)");
  add_common(sim, simulate_o);
  auto* reproduce = app.add_subcommand("reproduce", "run a named preset");
  reproduce->add_option("preset", preset, "preset name")->required();
  reproduce->add_option("-o,--out", reproduce_o.out_dir,
                        std::string("output directory (default $") + kOutputDirEnv + " or .)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "lcc: error: " << e.what() << '\n';
    return kUsage;
  }

  try {
    if (*analyze) cmd_analyze(analyze_o, out);
    else if (*energy) cmd_energy(energy_o, out);
    else if (*stability) cmd_stability(stability_o, out);
    else if (*scan) cmd_scan(scan_o, out, err);
    else if (*sim) cmd_simulate(simulate_o, out);
    else if (*reproduce) cmd_reproduce(preset, reproduce_o, out);
    return kOk;
  } catch (const ConfigError& e) {
    err << "lcc: config error: " << e.what() << '\n';
    return kConfig;
  } catch (const CollisionError& e) {
    err << "lcc: collision: " << e.what() << '\n';
    return kCollision;
  } catch (const IoError& e) {
    err << "lcc: I/O error: " << e.what() << '\n';
    return kIo;
  } catch (const NumericalError& e) {
    err << "lcc: numerical error: " << e.what() << '\n';
    return kNumerical;
  } catch (const DomainError& e) {
    err << "lcc: invalid argument: " << e.what() << '\n';
    return kDomain;
  } catch (const TopologyError& e) {
    err << "lcc: invalid topology: " << e.what() << '\n';
    return kDomain;
  } catch (const std::exception& e) {
    err << "lcc: internal error: " << e.what() << '\n';
    return kInternal;
  }
}

int run(int argc, char** argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args, std::cout, std::cerr);
}

}  // namespace lcc::cli
