#pragma once

#include <ostream>

namespace relaysched::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfigError = 1;
inline constexpr int kExitNotConverged = 2;

/// Entry point for the relaysched tool. Subcommands: solve, sweep, mc, sim,
/// compare, map.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace relaysched::cli
