#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace kmfg {

/// Entry point of the `kmfg` tool. `args` excludes the program name.
/// Returns the process exit code: 0 ok, 1 usage, 2 input or validation,
/// 3 hypothesis refused, 4 resource cap. Diagnostics go to `err` as
/// `error[ENNN]: message`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace kmfg
