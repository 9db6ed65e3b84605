#pragma once

#include <string>
#include <vector>

namespace dominative {

inline constexpr const char* kVersion = "0.1.0";

// Subcommands: solve, simulate, amvf-check, converge, compare, barrier-check.
// Exit codes: 0 success, 1 assertion failure, 2 configuration/usage error.
int cli_main(const std::vector<std::string>& args);

} // namespace dominative
