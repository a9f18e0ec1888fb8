#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace flowsched {

/// Exit codes.
inline constexpr int kExitPass = 0;
inline constexpr int kExitVerifyFailed = 1;
inline constexpr int kExitUsage = 2;

/// Entry point of the command-line tool; args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace flowsched
