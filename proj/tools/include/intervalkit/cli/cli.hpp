#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ik::cli {

enum ExitCode : int { kOk = 0, kFailed = 1, kConfigError = 2 };

/// Runs one command line (args[0] is the program name). Machine-readable
/// output goes to `out`; logs, the resolved config and usage text go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ik::cli
