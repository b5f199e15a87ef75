#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace oriflag {

// Process exit codes of the oriflag tool.
enum ExitCode : int {
    kExitOk = 0,
    kExitFailure = 1,
    kExitParse = 2,        // bad arguments, unparseable spec or space
    kExitUnsupported = 3,  // well-formed but unsupported space/mode combination
    kExitConvergence = 4,  // quadrature budget exhausted
};

/// Runs the command line `args` (args[0] is the program name), writing data to
/// `out` and diagnostics to `err`. Returns the process exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace oriflag
