#ifndef REGFORGE_CLI_HPP
#define REGFORGE_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace regforge {

/// Full command-line entry point, testable in-process. Returns the process
/// exit code: 0 pass/success, 1 audit or generation failure, 2 usage or
/// config error. Reports go to `out` (or the --out file), diagnostics to
/// `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace regforge

#endif
