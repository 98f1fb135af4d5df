#pragma once

#include <iosfwd>

namespace a4 {

/// Exit codes of the command-line tool.
enum ExitCode : int { kExitOk = 0, kExitUsage = 1, kExitPhysics = 2, kExitIo = 3 };

/// Entry point of `a4sim`. Subcommands: run, diagnose, ensemble, ab-phase,
/// oracle-compare, validate.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace a4
