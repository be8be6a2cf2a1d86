#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace fpnet {

/// Runs the command line tool. args[0] is the program name. Returns 0 on
/// success, 1 on usage errors, 2 on computation errors; errors are reported
/// as a single JSON line on `err`.
int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace fpnet
