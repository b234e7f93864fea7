#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ecmds {

// Runs one command given argv-style arguments (program name excluded).
// Normal output goes to `out`, diagnostics to `err`.  Returns the process
// exit code: 0 success, 1 verification failure, 2 bad input, 3 budget
// exceeded.  Identical arguments produce byte-identical output.
int cli_run(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

// main() adapter around cli_run.
int cli_main(int argc, char** argv);

}  // namespace ecmds
