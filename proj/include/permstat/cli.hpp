#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace permstat::cli {

// Exit codes: 0 when every check passes, 1 on any failed check, 2 on usage
// or data errors.
inline constexpr int kExitPass = 0;
inline constexpr int kExitFail = 1;
inline constexpr int kExitUsage = 2;

// args excludes the program name. The report goes to `out` unless --output
// names a file; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace permstat::cli
