#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace hypcurv {

enum ExitCode : int { exit_ok = 0, exit_validation = 2, exit_no_convergence = 3, exit_io = 4 };

// args excludes the program name. Reports go to out, diagnostics to err.
int cli_run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int cli_main(int argc, char** argv);

}  // namespace hypcurv
