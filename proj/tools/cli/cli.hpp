#pragma once

#include <iosfwd>

namespace gp::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitUsage = 2;

/// Runs one `gperiods` command. argv[0] is the program name.
/// Results that are not written to files go to `out`; diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace gp::cli
