#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace evac::cli {

// Entry point of the `evac` tool. Returns the process exit code: 0 on
// success, 1 on a runtime or validation failure, 2 on a usage error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace evac::cli
