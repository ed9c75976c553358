#pragma once

#include <string>
#include <vector>

namespace ucn::cli {

// Exit codes: 0 success, 1 computation error, 2 usage or I/O error.
inline constexpr int kOk = 0;
inline constexpr int kComputationError = 1;
inline constexpr int kUsageError = 2;

// Runs `ucn <args...>` (args exclude the program name).
int run(const std::vector<std::string>& args);

}  // namespace ucn::cli
