#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace trendcast::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitIo = 2;

/// Runs one subcommand. args excludes the program name. Results go to out (or --out files),
/// errors to err as one JSON object per line.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace trendcast::cli
