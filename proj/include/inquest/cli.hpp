#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace inquest::cli {

enum ExitCode : int {
    kSuccess = 0,
    kFailure = 1,  // validation or data error
    kUsage = 2,
};

/// Runs one subcommand. `args` excludes the program name. Results go to `out`,
/// diagnostics and usage text to `err`.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace inquest::cli
