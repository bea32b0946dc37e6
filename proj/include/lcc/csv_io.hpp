#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "lcc/ctrl_analysis.hpp"
#include "lcc/string_stability.hpp"
#include "lcc/traffic_sim.hpp"

namespace lcc::io {

/// Shortest-stable text for CSV cells: printf "%.12g".
std::string format_number(double x);

/// Writes `content` to a sibling temp file and renames it over `path`, so a
/// reader never sees a truncated file. Creates missing parent directories.
/// Throws IoError.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

std::string read_file(const std::filesystem::path& path);

/// n,t,lambda_min,trace_inv with trace_inv blank when singular.
std::string energy_csv(const std::vector<EnergyRow>& rows);
/// omega,mag
std::string magnitude_csv(const std::vector<std::pair<double, double>>& curve);
std::string region_csv(const RegionMap& map);
std::string trace_csv(const SimulationTrace& trace);
std::string events_csv(const SimulationTrace& trace);

}  // namespace lcc::io
