#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace firewatch::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitRuntime = 2;

/// Runs one `firewatch` invocation. `args` excludes the program name.
/// Returns 0 on success, 1 on usage errors (usage text on `err`) and 2 on
/// runtime failures (one-line cause on `err`).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace firewatch::cli
