#include "lcc/presets.hpp"

#include <cstdio>
#include <functional>
#include <map>

#include "lcc/csv_io.hpp"
#include "lcc/errors.hpp"
#include "lcc/scenarios.hpp"

namespace lcc::presets {

namespace fs = std::filesystem;

namespace {

using io::format_number;

void emit(Output& out, const fs::path& path, const std::string& content) {
  io::write_file_atomic(path, content);
  out.files.push_back(path);
}

std::string percent(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f%%", 100.0 * x);
  return buf;
}

Output fig5(const fs::path& dir) {
  Output out;
  const auto rows = energy_scaling_study(SystemVariant::FD_LCC, {1, 2, 3, 4, 5},
                                         {10.0, 20.0, 30.0}, default_coeffs());
  emit(out, dir / "fig5_energy.csv", io::energy_csv(rows));
  for (const auto& r : rows) {
    out.lines.push_back("n=" + std::to_string(r.n) + " t=" + format_number(r.t) +
                        " lambda_min=" + format_number(r.lambda_min) + " trace_inv=" +
                        (r.trace_inv ? format_number(*r.trace_inv) : "singular"));
  }
  return out;
}

// One "looking ahead" (or "looking behind") map over (mu_id, k_id).
void region(Output& out, const fs::path& path, int id, const FeedbackGains& fixed) {
  TransferSpec base = ladder_spec("HDV");
  base.gains = fixed;
  const RegionMap map = scan_region(base, GainAxis{id, GainKind::Mu, -10.0, 10.0, 101},
                                    GainAxis{id, GainKind::K, -10.0, 10.0, 101});
  emit(out, path, io::region_csv(map));
  out.lines.push_back(path.filename().string() + ": SS=" +
                      std::to_string(map.count(RegionClass::StringStable)) + " SU=" +
                      std::to_string(map.count(RegionClass::StringUnstable)) + " AU=" +
                      std::to_string(map.count(RegionClass::AsympUnstable)));
}

Output fig6(const fs::path& dir) {
  Output out;
  FeedbackGains none;
  FeedbackGains one_behind;
  one_behind.set(1, -1.0, -1.0);
  FeedbackGains two_behind;
  two_behind.set(2, -1.0, -1.0);
  region(out, dir / "fig6_a.csv", -1, none);
  region(out, dir / "fig6_b.csv", -2, none);
  region(out, dir / "fig6_c.csv", -1, one_behind);
  region(out, dir / "fig6_d.csv", -2, one_behind);
  region(out, dir / "fig6_e.csv", -1, two_behind);
  region(out, dir / "fig6_f.csv", -2, two_behind);
  return out;
}

Output fig7(const fs::path& dir) {
  Output out;
  region(out, dir / "fig7_a.csv", 1, {});
  region(out, dir / "fig7_b.csv", 2, {});
  return out;
}

Output fig8(const fs::path& dir) {
  Output out;
  for (const auto& name : table1_case_names()) {
    const TransferSpec spec = ladder_spec(name);
    emit(out, dir / ("fig8_" + name + ".csv"), io::magnitude_csv(magnitude_curve(spec, {})));
    const auto r = is_string_stable(spec);
    out.lines.push_back(name + ": peak |Gamma|=" + format_number(r.peak_mag) + " at omega=" +
                        format_number(r.peak_omega) + (r.stable ? " (string stable)" : ""));
  }
  return out;
}

void write_trace(Output& out, const fs::path& dir, const std::string& stem,
                 const SimulationTrace& trace) {
  emit(out, dir / (stem + "_trace.csv"), io::trace_csv(trace));
  emit(out, dir / (stem + "_events.csv"), io::events_csv(trace));
}

Output fig9(const fs::path& dir, const std::string& case_name) {
  Output out;
  const SimulationTrace trace = simulate(sinusoid_scenario(case_name));
  write_trace(out, dir, "fig9_case" + case_name, trace);
  const int tail = trace.column(2);
  double peak = 0.0;
  for (Eigen::Index r = 0; r < trace.vel.rows(); ++r) {
    peak = std::max(peak, std::abs(trace.vel(r, tail) - 15.0));
  }
  out.lines.push_back("case " + case_name + ": tail peak |v - v*| = " + format_number(peak) +
                      " m/s");
  return out;
}

Output fig10(const fs::path& dir, BrakeController controller, const std::string& tag) {
  Output out;
  const SimulationTrace lcc = simulate(brake_scenario(controller));
  const SimulationTrace ahead = simulate(brake_scenario(BrakeController::LookingAhead));
  write_trace(out, dir, "fig10_" + tag, lcc);
  write_trace(out, dir, "fig10_" + tag + "_looking_ahead", ahead);
  const BrakeMetrics a = brake_metrics(ahead);
  const BrakeMetrics b = brake_metrics(lcc);
  out.lines.push_back(tag + ": AAVE " + format_number(b.aave) + " m/s vs " +
                      format_number(a.aave) + " m/s looking ahead");
  return out;
}

Output table1(const fs::path& dir) {
  Output out;
  std::string csv = "case,vehicle,mu,k\n";
  for (const auto& name : table1_case_names()) {
    const FeedbackGains g = table1_gains(name);
    for (int id : g.ids()) {
      csv += name + ',' + std::to_string(id) + ',' + format_number(g.mu_of(id)) + ',' +
             format_number(g.k_of(id)) + '\n';
    }
  }
  emit(out, dir / "table1.csv", csv);
  out.lines.push_back("wrote gain setups for " + std::to_string(table1_case_names().size()) +
                      " cases");
  return out;
}

std::string comparison_rows(const std::string& prefix, const BrakeComparison& c) {
  auto row = [&](const std::string& name, const BrakeMetrics& m) {
    return prefix + name + ',' + format_number(m.aave) + ',' + format_number(m.fuel) + ',' +
           format_number(BrakeComparison::reduction(m.aave, c.looking_ahead.aave)) + ',' +
           format_number(BrakeComparison::reduction(m.fuel, c.looking_ahead.fuel)) + '\n';
  };
  return row("looking_ahead", c.looking_ahead) + row("fd_lcc", c.fd) + row("cf_lcc", c.cf);
}

std::string summary(const std::string& label, const BrakeComparison& c) {
  return label + ": AAVE reduction fd " +
         percent(BrakeComparison::reduction(c.fd.aave, c.looking_ahead.aave)) + " cf " +
         percent(BrakeComparison::reduction(c.cf.aave, c.looking_ahead.aave)) +
         ", fuel reduction fd " +
         percent(BrakeComparison::reduction(c.fd.fuel, c.looking_ahead.fuel)) + " cf " +
         percent(BrakeComparison::reduction(c.cf.fuel, c.looking_ahead.fuel));
}

Output table2(const fs::path& dir) {
  Output out;
  const BrakeComparison c = compare_brake_controllers();
  emit(out, dir / "table2.csv",
       "controller,aave,fc,aave_reduction,fc_reduction\n" + comparison_rows("", c));
  out.lines.push_back(summary("homogeneous", c));
  return out;
}

Output appendix_c(const fs::path& dir) {
  Output out;
  std::string csv = "seed,controller,aave,fc,aave_reduction,fc_reduction\n";
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const BrakeComparison c = compare_brake_controllers(HeterogeneitySpec{}, seed);
    csv += comparison_rows(std::to_string(seed) + ',', c);
    out.lines.push_back(summary("seed " + std::to_string(seed), c));
  }
  emit(out, dir / "appendixC.csv", csv);
  return out;
}

const std::map<std::string, std::function<Output(const fs::path&)>>& registry() {
  static const std::map<std::string, std::function<Output(const fs::path&)>> r = {
      {"fig5", fig5},
      {"fig6", fig6},
      {"fig7", fig7},
      {"fig8", fig8},
      {"fig9-caseA", [](const fs::path& d) { return fig9(d, "A"); }},
      {"fig9-caseB", [](const fs::path& d) { return fig9(d, "B"); }},
      {"fig9-caseC", [](const fs::path& d) { return fig9(d, "C"); }},
      {"fig9-caseD", [](const fs::path& d) { return fig9(d, "D"); }},
      {"fig10-fd", [](const fs::path& d) { return fig10(d, BrakeController::FdLcc, "fd"); }},
      {"fig10-cf", [](const fs::path& d) { return fig10(d, BrakeController::CfLcc, "cf"); }},
      {"table1", table1},
      {"table2", table2},
      {"appendixC", appendix_c},
  };
  return r;
}

}  // namespace

const std::vector<std::string>& names() {
  static const std::vector<std::string> n = [] {
    std::vector<std::string> out;
    for (const auto& [name, fn] : registry()) out.push_back(name);
    return out;
  }();
  return n;
}

Output run(const std::string& name, const fs::path& out_dir) {
  const auto& r = registry();
  const auto it = r.find(name);
  if (it == r.end()) {
    std::string known;
    for (const auto& n : names()) known += (known.empty() ? "" : ", ") + n;
    throw DomainError("unknown preset '" + name + "' (known: " + known + ")");
  }
  return it->second(out_dir);
}

}  // namespace lcc::presets
