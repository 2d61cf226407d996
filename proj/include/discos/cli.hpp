#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace discos::cli {

/// Exit statuses of `run`.
inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitNumeric = 3;
inline constexpr int kExitBoundViolation = 4;

/// Parses a position literal: a number, "pi", "<c>pi" or "<c>pi/<d>"
/// (e.g. "0.6pi", "-pi/4").
double parse_position(std::string_view text);

/// Runs the command line `args` (without the program name). CSV goes to
/// `out` unless -o names a file; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace discos::cli
