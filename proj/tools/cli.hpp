#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace rpr::cli {

/// Exit codes: 0 success, 2 user or input error, 3 internal invariant
/// violation.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 2;
inline constexpr int kExitInternal = 3;

/// Runs the command line `args` (args[0] is the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace rpr::cli
