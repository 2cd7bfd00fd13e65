#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace propscore::cli {

enum ExitCode : int { kPass = 0, kFail = 1, kUsage = 2 };

/// Runs the command line `args` (without the program name). Reports go to
/// `out`, diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace propscore::cli
