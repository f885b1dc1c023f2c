#pragma once

// Command-line front end. Exit codes: 0 success (or matched / agreed), 1 input error,
// 2 numerical failure or a failed check.

#include <iosfwd>
#include <string>
#include <vector>

namespace nhlab::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 1;
inline constexpr int kExitNumeric = 2;

/// Runs the CLI on `args` (without the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Default reduction tolerance: NHLAB_TOL when set to a positive number, else 1e-8.
double default_tolerance();

}  // namespace nhlab::cli
