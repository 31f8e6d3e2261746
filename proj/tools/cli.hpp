#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace fastortho::cli {

enum ExitCode : int {
    kOk = 0,
    kFailure = 1,
    kValidation = 2,
    kNonConvergence = 3,
    kIo = 4,
};

/// Runs one command line (without the program name). Reports go to `out` unless
/// an output path is given; diagnostics go to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace fastortho::cli
