#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace ghkit::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitGate = 3;
inline constexpr int kExitBudget = 4;

inline constexpr const char* kVersion = "ghkit 0.1.0";

/// Runs one command line (args[0] is the program name). The JSON report goes
/// to `out`, human-readable summaries and diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ghkit::cli
