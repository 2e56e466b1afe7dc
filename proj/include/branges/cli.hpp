#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace branges::cli {

inline constexpr const char* kToolVersion = "0.1.0";

enum ExitCode : int { kPass = 0, kFail = 1, kUsage = 2, kNumerical = 3 };

/// Runs one command. args excludes the program name. The report goes to out
/// (or to --out), diagnostics to err.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

std::string sha256_hex(const std::string& data);

}  // namespace branges::cli
