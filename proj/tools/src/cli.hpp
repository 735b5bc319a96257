#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace gramprof::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitData = 2,
  kExitInternal = 3,
};

// Runs the command line (arguments without the program name) and returns the
// process exit code. Reports go under --out; progress goes to `out`,
// diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace gramprof::cli
