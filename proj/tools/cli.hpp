#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace kondratiev {

// Exit codes: 0 ok (a Fails verdict is still ok), 1 verify found a failing suite,
// 2 usage or invalid parameters, 3 numerical failure.
inline constexpr int kExitOk = 0;
inline constexpr int kExitVerifyFailed = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitNumerical = 3;

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
// args excludes the program name
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace kondratiev
