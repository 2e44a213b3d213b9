#pragma once

#include <string>
#include <vector>

namespace rdcache {

// Exit codes shared by the binary and the in-process test driver.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitInput = 2;
inline constexpr int kExitInfeasible = 3;

// Runs one subcommand (analyze, generate, aggregate, estimate, simulate,
// validate, optimize). args excludes the program name. Reports go to stdout
// unless --out is given.
int run_cli(const std::vector<std::string>& args);

}  // namespace rdcache
