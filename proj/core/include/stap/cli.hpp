#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace stap {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfigError = 1;
inline constexpr int kExitRuntimeError = 2;

/// Entry point of the `stap` tool. Subcommands: run, complexity, scene, pd.
/// `args` excludes the program name. Returns 0 on success, 1 on a usage or
/// configuration error, 2 on a runtime failure.
int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace stap
