#pragma once

#include <ostream>

namespace abspot {

enum ExitCode : int { kExitOk = 0, kExitInvariant = 1, kExitInput = 2, kExitBudget = 3, kExitIo = 4 };

/// Entry point of the command-line tool. JSON reports go to `out`, one-line
/// summaries and diagnostics to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace abspot
