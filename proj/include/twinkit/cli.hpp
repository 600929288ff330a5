#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace twinkit::cli {

enum ExitCode : int { kOk = 0, kInternal = 1, kUsage = 2, kData = 3, kIo = 4 };

/// Runs one command. `args` excludes the program name. Machine-readable output goes
/// to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace twinkit::cli
