#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace anelor::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitNumeric = 1;
inline constexpr int kExitUsage = 2;

/// Runs the command line `args` (without the program name). Data goes to
/// `out` unless --output is given; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace anelor::cli
