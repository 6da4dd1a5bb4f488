#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace spinmirror::cli {

/// Exit statuses of the command-line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitNumerical = 3;

/// Runs one invocation. `args` excludes the program name. Human-readable
/// messages go to `err`; the result summary goes to `out` as JSON.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace spinmirror::cli
