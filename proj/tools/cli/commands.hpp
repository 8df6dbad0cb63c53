#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace decaywalk::cli {

/// Process exit codes of the decaywalk tool.
enum ExitCode : int
{
    exit_ok = 0,
    exit_comparison_failed = 1,
    exit_usage = 2,
    exit_not_converged = 3,
};

/// Runs the command line `args` (program name excluded), writing records to
/// `out` and diagnostics to `err`. Returns one of ExitCode.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace decaywalk::cli
