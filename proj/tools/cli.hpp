#pragma once

#include <iosfwd>

namespace dagfuse::cli {

enum ExitCode : int {
  kOk = 0,
  kInputError = 1,
  kNotConverged = 2,
  kContractViolation = 3,
};

/// Entry point of the `dagfuse` command line tool. Subcommands: solve, path,
/// smooth, simulate, verify.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace dagfuse::cli
