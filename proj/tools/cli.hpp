#pragma once

#include <iosfwd>

namespace ergmlab::cli {

inline constexpr int kSchemaVersion = 1;

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitPrecondition = 3;

/// Parses argv, runs the subcommand and returns the process exit code.
/// Reports go to `out` (and to files named by the options); diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace ergmlab::cli
