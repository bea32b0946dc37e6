#include <cstdlib>
#include <filesystem>
#include <sstream>

#include <gtest/gtest.h>

#include "lcc/cli.hpp"
#include "lcc/config.hpp"
#include "lcc/csv_io.hpp"
#include "lcc/errors.hpp"
#include "lcc/presets.hpp"

using namespace lcc;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("lcc_cli_io_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

struct CliResult {
  int code;
  std::string out;
  std::string err;
};

CliResult run_cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string config_error(const json& doc) {
  try {
    parse_config(doc);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST(Config, EmptyDocumentGivesDefaults) {
  const RunConfiguration cfg = parse_config(json::object());
  EXPECT_EQ(cfg.scenario.variant, SystemVariant::GeneralLCC);
  EXPECT_EQ(cfg.scenario.m, 2);
  EXPECT_EQ(cfg.scenario.n, 2);
  EXPECT_DOUBLE_EQ(cfg.scenario.v_star, 15.0);
  EXPECT_EQ(cfg.frequency, FrequencyGrid{});
  EXPECT_EQ(cfg.analysis, AnalysisSettings{});
}

TEST(Config, ChainDefaultsDependOnVariant) {
  EXPECT_EQ(parse_config(json{{"variant", "fd"}}).scenario.m, 0);
  EXPECT_EQ(parse_config(json{{"variant", "ccc"}}).scenario.n, 0);
}

TEST(Config, GainsParseByVehicleId) {
  const json doc = json::parse(R"({
    "controller": {"mode": "explicit_linear",
                   "gains": {"-2": {"mu": 1, "k": -1}, "-1": {"mu": 1, "k": -1},
                             "1": {"mu": -1, "k": -1}, "2": {"mu": -1, "k": -1}}}
  })");
  const RunConfiguration cfg = parse_config(doc);
  EXPECT_EQ(cfg.scenario.cav.mode, ControllerMode::ExplicitLinear);
  EXPECT_EQ(cfg.scenario.cav.gains, table1_gains("D"));
  EXPECT_EQ(transfer_spec(cfg).gains, table1_gains("D"));
}

TEST(Config, RoundTripIsLossless) {
  json doc = json::parse(R"({
    "variant": "general", "m": 1, "n": 3, "v_star": 12.5, "seed": 9,
    "driver": {"alpha": 0.7, "delay": 0.2},
    "heterogeneity": {"alpha_jitter": 0.05},
    "driver_overrides": {"2": {"beta": 1.1}},
    "perturbation": {"type": "head_sinusoid", "amplitude": 1, "period": 12, "start": 5},
    "controller": {"mode": "explicit_linear", "gains": {"-1": {"mu": 0.3, "k": -0.2}}},
    "analysis": {"energy_n": [2, 3], "energy_t": [5.5]},
    "scan": {"axis1": {"gain": "mu2", "resolution": 11}},
    "metrics": {"t_start": 1, "t_end": 2}
  })");
  const RunConfiguration a = parse_config(doc);
  const RunConfiguration b = parse_config(to_json(a));
  EXPECT_EQ(a, b);
  EXPECT_EQ(to_json(a), to_json(b));
  EXPECT_EQ(a.scan.axis1.label(), "mu2");
}

TEST(Config, UnknownKeysNameTheirPath) {
  EXPECT_EQ(config_error(json{{"bogus", 1}}), "config /bogus: unknown key");
  EXPECT_EQ(config_error(json{{"driver", {{"alpah", 0.6}}}}), "config /driver/alpah: unknown key");
  EXPECT_NE(config_error(json{{"perturbation", {{"type", "wobble"}}}}).find("/perturbation/type"),
            std::string::npos);
  EXPECT_NE(config_error(json{{"m", "two"}}).find("/m"), std::string::npos);
  EXPECT_NE(config_error(json{{"schema_version", 2}}).find("/schema_version"), std::string::npos);
}

TEST(Config, OverridesParseJsonOrString) {
  json doc = json::object();
  apply_override(doc, "driver.alpha=0.75");
  apply_override(doc, "variant=cf");
  apply_override(doc, "analysis.energy_n=[1,2]");
  EXPECT_DOUBLE_EQ(doc["driver"]["alpha"].get<double>(), 0.75);
  EXPECT_EQ(doc["variant"], "cf");
  const RunConfiguration cfg = parse_config(doc);
  EXPECT_DOUBLE_EQ(cfg.scenario.hdv_base.alpha, 0.75);
  EXPECT_EQ(cfg.analysis.energy_n, (std::vector<int>{1, 2}));
  EXPECT_THROW(apply_override(doc, "no_equals_sign"), ConfigError);
}

TEST(Config, KeyListDocumentsUnits) {
  for (const auto& k : config_keys()) {
    EXPECT_FALSE(k.units.empty()) << k.key;
    EXPECT_FALSE(k.description.empty()) << k.key;
  }
}

TEST(CsvIo, FormatNumber) {
  EXPECT_EQ(io::format_number(0.1), "0.1");
  EXPECT_EQ(io::format_number(1.0 / 3.0), "0.333333333333");
  EXPECT_EQ(io::format_number(-2e-20), "-2e-20");
}

TEST(CsvIo, AtomicWriteReplacesAndLeavesNoTemp) {
  const fs::path dir = scratch("atomic");
  const fs::path file = dir / "nested" / "a.csv";
  io::write_file_atomic(file, "one\n");
  io::write_file_atomic(file, "two\n");
  EXPECT_EQ(io::read_file(file), "two\n");
  int entries = 0;
  for ([[maybe_unused]] const auto& e : fs::directory_iterator(file.parent_path())) ++entries;
  EXPECT_EQ(entries, 1);
}

TEST(CsvIo, WriteIntoAFileFails) {
  const fs::path dir = scratch("blocked");
  io::write_file_atomic(dir / "plain", "x");
  EXPECT_THROW(io::write_file_atomic(dir / "plain" / "child.csv", "y"), IoError);
  EXPECT_THROW(io::read_file(dir / "missing.csv"), IoError);
}

TEST(Cli, ExitCodes) {
  const fs::path dir = scratch("codes");
  EXPECT_EQ(run_cli({"analyze", "--variant", "fd", "--n", "2", "-o", dir.string()}).code, cli::kOk);
  EXPECT_EQ(run_cli({"frobnicate"}).code, cli::kUsage);
  EXPECT_EQ(run_cli({"analyze", "--variant", "fd", "--set", "bogus=1"}).code, cli::kConfig);
  EXPECT_EQ(run_cli({"analyze", "--variant", "fd", "--n", "-1"}).code, cli::kDomain);
  EXPECT_EQ(run_cli({"reproduce", "fig99", "-o", dir.string()}).code, cli::kDomain);
  EXPECT_EQ(run_cli({"simulate", "--variant", "fd", "--n", "2"}).code, cli::kDomain);
  const auto io = run_cli({"energy", "--variant", "fd", "-o", (dir / "x" / "y").string(), "--set",
                       "analysis.energy_n=[1]", "--set", "analysis.energy_t=[1]"});
  EXPECT_EQ(io.code, cli::kOk);
  io::write_file_atomic(dir / "file", "");
  EXPECT_EQ(run_cli({"energy", "--variant", "fd", "-o", (dir / "file").string(), "--set",
                 "analysis.energy_n=[1]", "--set", "analysis.energy_t=[1]"})
                .code,
            cli::kIo);
}

TEST(Cli, CollisionExitCode) {
  const fs::path dir = scratch("collision");
  const auto r = run_cli({"simulate", "--variant", "cf", "--n", "2", "-o", dir.string(), "--set",
                      "perturbation={\"type\":\"follower_brake\",\"vehicle\":1,\"decel\":-5,"
                      "\"duration\":6,\"start\":1}",
                      "--set", "controller.mode=explicit_linear", "--set",
                      "driver_overrides={\"2\":{\"alpha\":0.01,\"beta\":0.01}}"});
  EXPECT_EQ(r.code, cli::kCollision) << r.err;
}

TEST(Cli, HelpListsEveryKey) {
  const auto r = run_cli({"--help"});
  EXPECT_EQ(r.code, cli::kOk);
  for (const auto& k : config_keys()) EXPECT_NE(r.out.find(k.key), std::string::npos) << k.key;
  for (const auto& p : presets::names()) EXPECT_NE(r.out.find(p), std::string::npos) << p;
}

TEST(Cli, ConfigFileAndEnvOutputDir) {
  const fs::path dir = scratch("envdir");
  io::write_file_atomic(dir / "cfg.json", R"({"variant": "ccc", "m": 2})");
  ::setenv(cli::kOutputDirEnv, (dir / "out").string().c_str(), 1);
  const auto r = run_cli({"analyze", "-c", (dir / "cfg.json").string()});
  ::unsetenv(cli::kOutputDirEnv);
  EXPECT_EQ(r.code, cli::kOk) << r.err;
  EXPECT_NE(r.out.find("dim=2"), std::string::npos) << r.out;
}

TEST(Cli, StabilityWritesMagnitudeCurve) {
  const fs::path dir = scratch("stability");
  const auto r = run_cli({"stability", "-o", dir.string(), "--set", "frequency.points=50"});
  ASSERT_EQ(r.code, cli::kOk) << r.err;
  const std::string csv = io::read_file(dir / "magnitude.csv");
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "omega,mag");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 51);
}

TEST(Cli, ReproduceTable2IsByteIdentical) {
  const fs::path a = scratch("table2_a");
  const fs::path b = scratch("table2_b");
  ASSERT_EQ(run_cli({"reproduce", "table2", "-o", a.string()}).code, cli::kOk);
  ASSERT_EQ(run_cli({"reproduce", "table2", "-o", b.string()}).code, cli::kOk);
  const std::string first = io::read_file(a / "table2.csv");
  EXPECT_EQ(first, io::read_file(b / "table2.csv"));
  EXPECT_EQ(first.substr(0, first.find('\n')), "controller,aave,fc,aave_reduction,fc_reduction");
}

TEST(Cli, SimulateIsByteIdentical) {
  const fs::path a = scratch("sim_a");
  const fs::path b = scratch("sim_b");
  const std::vector<std::string> common{"simulate", "--set", "perturbation.type=head_sinusoid",
                                        "--set", "horizon=25"};
  auto with_out = [&](const fs::path& d) {
    auto args = common;
    args.insert(args.end(), {"-o", d.string()});
    return args;
  };
  ASSERT_EQ(run_cli(with_out(a)).code, cli::kOk);
  ASSERT_EQ(run_cli(with_out(b)).code, cli::kOk);
  EXPECT_EQ(io::read_file(a / "trace.csv"), io::read_file(b / "trace.csv"));
  EXPECT_EQ(io::read_file(a / "events.csv"), io::read_file(b / "events.csv"));
}
