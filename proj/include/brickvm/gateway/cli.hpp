#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace brickvm::gateway {

/// `brickvm run|stats|merge|convert|serve ...`; `args` excludes the program name.
/// Returns the process exit status.
int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace brickvm::gateway
