#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace matterwave::cli {

// Runs one CLI invocation.  `args` excludes the program name.  Datasets go
// to `out` (or the --output destination), diagnostics to `err`.
// Exit status: 0 success, 2 invalid request (offending flag named),
// 3 computation error (message carries the module error name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace matterwave::cli
