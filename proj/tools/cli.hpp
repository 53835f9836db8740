#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace zm::cli {

/// Exit codes: 0 clean, 1 usage or input error, 2 finished but some item
/// missed its quality standard (the flaws are listed on `err`).
inline constexpr int kExitClean = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitFlaws = 2;

/// Runs `zetamoments <command> ...`; args[0] is the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace zm::cli
