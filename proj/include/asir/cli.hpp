#pragma once

#include <string>
#include <vector>

namespace asir {

/// Full command-line entry point. Exit codes: 0 success (verify: pass),
/// 1 verification failure, 2 configuration error, 3 runtime error.
int run_cli(int argc, const char* const* argv);

/// Convenience overload for tests; args excludes the program name.
int run_cli(const std::vector<std::string>& args);

}  // namespace asir
