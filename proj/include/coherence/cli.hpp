#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace coherence::cli {

/// Exit statuses of the command-line tool.
enum ExitCode : int {
  kOk = 0,
  kValidationFailed = 1,
  kBadInput = 2,
  kSolverFailure = 3,
};

/// Parses `args` (args[0] is the program name) and runs the selected verb.
/// Results go to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace coherence::cli
