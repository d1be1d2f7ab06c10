#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace trigamma {

/// Runs one CLI invocation. args excludes the program name.
/// Returns 0 on success, 1 on domain/data/computation errors, 2 on usage or config errors.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace trigamma
