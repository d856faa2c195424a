#pragma once

#include <iosfwd>

namespace quasitame {

/// Exit codes shared by all subcommands.
enum ExitCode : int {
  kExitOk = 0,
  kExitMismatch = 1,     // check-witness rejected the report; oracle found mismatches
  kExitInput = 2,        // unreadable file, syntax/semantic/schema error, size limits
  kExitInconclusive = 3, // rank increment not settled at the horizon
  kExitInternal = 4,
};

/// Runs `quasitame <subcommand> ...`. Output goes to `out` only on success
/// (exit 0, or 1 for an oracle sweep with mismatches); diagnostics go to `err`.
int run_cli(int argc, const char *const *argv, std::ostream &out, std::ostream &err);

} // namespace quasitame
