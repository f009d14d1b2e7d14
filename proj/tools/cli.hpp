#pragma once

// The qfdiv command line, as a function so tests can drive it in-process.
//
// Exit codes: 0 success, 1 inequality violation, 2 usage/parse/IO error,
// 3 mathematical precondition failure.

#include <ostream>
#include <string>
#include <vector>

namespace qfdiv::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitViolation = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitPrecondition = 3;

/// args excludes the program name. Reports go to `out` unless --out names a file.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qfdiv::cli
