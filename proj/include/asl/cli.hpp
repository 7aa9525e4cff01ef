#pragma once

#include <iostream>
#include <string>
#include <vector>

namespace asl {

/// Command line front end. Returns 0 on success, 1 on usage errors,
/// 2 on numerical failures.
int cli_run(std::vector<std::string> args, std::ostream& out = std::cout,
            std::ostream& err = std::cerr);

} // namespace asl
