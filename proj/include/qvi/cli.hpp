#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace qvi::cli {

inline constexpr int kExitConverged = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitDiverged = 2;
inline constexpr int kExitIterationCap = 3;

/// Runs one command. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// 17 significant digits, locale-independent.
std::string format_number(double x);

}  // namespace qvi::cli
