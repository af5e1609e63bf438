#pragma once

#include <iosfwd>

namespace memdomain::cli {

/// Exit status contract of the command-line tool.
enum ExitCode : int { kOk = 0, kComputationError = 1, kValidationError = 2 };

/// Entry point of `memdomain`. Output files are written atomically; a
/// manifest.json echoing the resolved configuration accompanies every run.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace memdomain::cli
