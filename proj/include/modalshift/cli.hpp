#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace modalshift {

/// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 2;
inline constexpr int kExitRuntime = 3;

/// Entry point behind the modalshift binary. args[0] is the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace modalshift
