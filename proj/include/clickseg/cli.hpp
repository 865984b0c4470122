#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace clickseg::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitDomainError = 1;
inline constexpr int kExitUsage = 2;

/// Environment variable naming the default project root for `serve`.
inline constexpr const char* kProjectDirEnv = "CLICKSEG_PROJECT_DIR";

/// Runs one command line (args[0] is the program name).
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace clickseg::cli
