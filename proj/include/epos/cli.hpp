#ifndef EPOS_CLI_HPP
#define EPOS_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace epos::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitVerifyFailed = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitRefused = 3;  // limit exceeded or method not applicable
inline constexpr int kExitTrue = 10;
inline constexpr int kExitFalse = 20;

/// Runs `epos` with `args` (without the program name). Reads EPOS_LIMITS
/// from the environment.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace epos::cli

#endif  // EPOS_CLI_HPP
