#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace irts {

/// Exit codes of the command-line tool.
enum ExitCode : int { kExitOk = 0, kExitData = 1, kExitUsage = 2 };

/// Runs the `irts` tool on `args` (program name excluded). Results go to
/// `out`, diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace irts
