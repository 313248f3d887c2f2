#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace claimflow::cli {

/// Process exit codes.
enum ExitCode : int {
  kOk = 0,
  kDataError = 1,
  kUsageError = 2,
  kIoError = 3,
};

/// Runs the command line (args excludes the program name). Output that
/// scripts consume goes to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace claimflow::cli
