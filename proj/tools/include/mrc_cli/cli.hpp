#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace mrc::cli {

// Process exit codes shared by every subcommand.
enum ExitCode : int {
  kOk = 0,
  kUsage = 2,     // bad flags, shapes or input values
  kFormat = 3,    // unreadable or malformed container / blob
  kInternal = 4,  // broken internal invariant
};

// Runs one command line (without the program name). All normal output goes to
// `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mrc::cli
