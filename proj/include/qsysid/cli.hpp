#pragma once

#include <iosfwd>

namespace qsysid::cli {

inline constexpr const char* kVersion = "0.1.0";

/// Process exit codes. Stable across versions.
enum ExitCode : int {
    kSuccess = 0,
    kConfigError = 2,
    kIoError = 3,
    kLevelMismatch = 4,
    kDimensionError = 5,
};

/// Runs `qsysid <simulate|identify|benchmark> ...` and returns the exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace qsysid::cli
