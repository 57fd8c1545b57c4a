#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace proppwalk {

// Exit codes of the command-line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;      // parse errors, bad configs, bad flags
inline constexpr int kExitResource = 3;   // memory budget refusal
inline constexpr int kExitForcing = 4;    // forced configuration failed verification

/// Runs the tool on `args` (without the program name).
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace proppwalk
