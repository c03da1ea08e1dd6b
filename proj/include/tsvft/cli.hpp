#pragma once

#include <ostream>

namespace tsvft {

// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitRejectOrInternal = 1;
inline constexpr int kExitParse = 2;
inline constexpr int kExitPrecondition = 3;
inline constexpr int kExitTimeout = 4;  // ILP "NA"
inline constexpr int kExitInfeasible = 5;
inline constexpr int kExitOverflow = 6;

// Runs one subcommand (ktol, gen, plan, verify, inject, synth, bench).
// argv excludes the program name. Reports go to `out`, diagnostics to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace tsvft
