#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace qcap::cli {

// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitResource = 3;

/// Overrides the default residual tolerance of `classify`.
inline constexpr const char* kToleranceEnvVar = "QCAP_TOLERANCE";

/// Runs the command line `args` (without the program name). All output goes
/// to `out`, diagnostics to `err`; returns the exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qcap::cli
