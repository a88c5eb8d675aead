#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ploco::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitAcceptanceFailure = 1;
inline constexpr int kExitUsage = 2;

/// Runs one `ploco` invocation. `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ploco::cli
