#pragma once

#include <iosfwd>

namespace sllbar {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitBlowup = 3;
inline constexpr int kExitIo = 4;

/// Entry point of the `sllbar` executable. Subcommands: simulate, ensemble,
/// invariant, converge, check. Progress goes to `out` unless --quiet; errors
/// and usage go to `err`.
int run_command(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace sllbar
