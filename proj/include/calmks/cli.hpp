#pragma once

#include <iosfwd>

namespace calmks {

/// Exit codes of the command-line tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,     // bad flags or config values; nothing computed
  kExitIo = 2,        // unreadable input or unwritable output
  kExitRunFailed = 3  // blow-up, or a partially failed sweep
};

/// Entry point of `calmks simulate|converge|norms`. Normal output goes to
/// `out`, diagnostics to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace calmks
