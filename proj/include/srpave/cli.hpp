#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace srpave::cli {

/// Runs the srpave command line. Reports go to `out` unless --out names a
/// file; diagnostics go to `err`. Returns the process exit code: 0 when every
/// check passed, 1 when a suite or paving check failed, 2 on bad input.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int main(int argc, char** argv);

}  // namespace srpave::cli
