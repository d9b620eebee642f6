#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace tg::cli {

enum ExitCode : int { kOk = 0, kNegative = 1, kInvalid = 2, kInputError = 3 };

// Runs one command. `args` excludes the program name. JSON results go to
// `out`, JSON error objects to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace tg::cli
