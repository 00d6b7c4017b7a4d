#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace rstop {

// process exit codes shared by the CLI entry point and the command helpers
inline constexpr int EXIT_OK = 0;
inline constexpr int EXIT_SCENARIO = 2;  // parse/usage/scenario problems
inline constexpr int EXIT_SOLVER = 3;    // domain or solver failures
inline constexpr int EXIT_CENSORED = 4;  // > 0.1% of paths hit the horizon

// Full command-line driver (subcommands solve / value / simulate / sweep).
// Deterministic: equal inputs produce byte-identical outputs.
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

} // namespace rstop
