#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace chanent::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitNumerical = 3;
inline constexpr int kExitCheckFailed = 4;

/// Runs one command line (without the program name). Reports go to out,
/// diagnostics to err; the return value is the process exit status.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace chanent::cli
