#pragma once

#include <iosfwd>

namespace mobilab {

// Exit codes of the command-line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;      // usage or config error
inline constexpr int kExitParse = 2;      // malformed trace file
inline constexpr int kExitInvalid = 3;    // `validate` found violations

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace mobilab
