#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace flatfloor {

/// Exit codes of the command-line tool.
enum ExitCode : int { kExitOk = 0, kExitInputError = 1, kExitSuiteFailure = 2 };

/// Runs the tool on `args` (without the program name).
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace flatfloor
