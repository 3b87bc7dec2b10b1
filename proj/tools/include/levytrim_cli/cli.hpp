#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace levytrim::cli {

/// Exit codes: 0 every check passed, 1 a check failed (or a numerical failure), 2 bad
/// arguments or configuration.
inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitConfig = 2;

/// Runs the tool on `args` (program name excluded).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int run(int argc, const char* const* argv);

}  // namespace levytrim::cli
