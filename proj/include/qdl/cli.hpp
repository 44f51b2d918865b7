#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace qdl {

// Subcommand front end. Returns 0 on success, 1 when a computation fails and 2
// for usage errors.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qdl
