#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace lcc::cli {

enum ExitCode : int {
  kOk = 0,
  kInternal = 1,
  kUsage = 2,
  kConfig = 3,
  kDomain = 4,  // domain or topology error
  kNumerical = 5,
  kCollision = 6,
  kIo = 7,
};

/// Environment variable naming the default output directory.
inline constexpr const char* kOutputDirEnv = "LCC_OUTPUT_DIR";

/// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv);

}  // namespace lcc::cli
