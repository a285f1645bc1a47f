#ifndef KHL_TOOLS_CLI_HPP
#define KHL_TOOLS_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace khl::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumerical = 3;

/// Runs one `khl` invocation. `args` excludes the program name. Reports go
/// to `out` unless `--out` names a file; diagnostics go to `err` as a single line.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace khl::cli

#endif  // KHL_TOOLS_CLI_HPP
