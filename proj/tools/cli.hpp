#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace fpaft::cli {

enum ExitCode : int { kOk = 0, kFailure = 1, kUsage = 2, kData = 3, kNumerical = 4 };

/// Runs one invocation. `args` excludes the program name. Tables go to `out`, diagnostics
/// and warnings to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace fpaft::cli
