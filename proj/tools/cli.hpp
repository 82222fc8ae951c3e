#pragma once

#include <iosfwd>

namespace embedgeo::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;

/// Parses argv and runs one subcommand. Reports go to `out`, diagnostics to
/// `err`. Returns 0 on success, 1 on a usage error, 2 on a data error.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace embedgeo::cli
