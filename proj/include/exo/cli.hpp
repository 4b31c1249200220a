#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace exo {

inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitUsage = 2;

/// Runs one command. `args` excludes the program name. Returns 0 when the
/// command succeeds and all of its checks pass, 1 on a failed check and 2 on
/// a usage, parse or I/O error.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace exo
