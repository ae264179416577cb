#ifndef CFP_CLI_CLI_HPP
#define CFP_CLI_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace cfp::cli {

enum ExitCode : int { ok = 0, user_error = 1, internal_error = 2 };

/// Runs one cfp-lab invocation. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cfp::cli

#endif  // CFP_CLI_CLI_HPP
