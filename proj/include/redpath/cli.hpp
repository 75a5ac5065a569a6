#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace redpath {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitNumeric = 3;

/// Entry point of the command-line tool; returns the process exit status.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// "start:stop:step", endpoints inclusive within 1e-12 of a step.
/// Throws std::invalid_argument on malformed text, step <= 0 or stop < start.
std::vector<double> parse_grid(const std::string& text);

/// Comma-separated reals. Throws std::invalid_argument on malformed items.
std::vector<double> parse_real_list(const std::string& text);

}  // namespace redpath
