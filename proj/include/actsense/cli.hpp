#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace actsense {

// Exit codes: 0 success / verdict true, 1 verdict false, 2 usage, parse or
// input error, 3 internal defect (oracle disagreement).
enum ExitCode : int { kExitOk = 0, kExitFalse = 1, kExitUsage = 2, kExitDefect = 3 };

// `args` excludes the program name. JSON goes to `out`, summaries to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace actsense
