#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace muskat::cli {

inline constexpr const char* kVersion = "0.1.0";

enum ExitCode : int { ok = 0, config_error = 2, solver_failure = 3, check_failed = 4 };

/// Entry point behind the `muskat` executable. args[0] is the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int run(int argc, char** argv);

}  // namespace muskat::cli
