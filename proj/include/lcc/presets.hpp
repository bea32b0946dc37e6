#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace lcc::presets {

/// fig5, fig6, fig7, fig8, fig9-caseA..D, fig10-fd, fig10-cf, table1, table2,
/// appendixC.
const std::vector<std::string>& names();

struct Output {
  std::vector<std::filesystem::path> files;
  /// Human-readable summary printed by the CLI.
  std::vector<std::string> lines;
};

/// Runs a preset and writes its CSVs into `out_dir`. Throws DomainError for an
/// unknown name.
Output run(const std::string& name, const std::filesystem::path& out_dir);

}  // namespace lcc::presets
