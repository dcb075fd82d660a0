#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace copulas {

inline constexpr int kExitOk = 0;
/// DSL parse error, or a failing verification.
inline constexpr int kExitFailure = 1;
/// Evaluation or configuration error.
inline constexpr int kExitConfig = 2;
inline constexpr int kExitIo = 3;

/// Runs the command line `args` (without the program name).
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace copulas
