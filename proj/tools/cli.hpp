#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace latticebeam::cli {

enum ExitCode : int {
    kSuccess = 0,
    kUsage = 2,
    kNumerical = 3,
    kIoFailure = 4,
    kNotFound = 5,
};

/// Runs one command line (without the program name). Reports go to `out`,
/// diagnostics, warnings and the version string to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace latticebeam::cli
