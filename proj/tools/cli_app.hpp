#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace lsde::cli {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr const char* kConfigFormat = "lie-sde-config/1";

enum ExitCode : int {
    kPass = 0,
    kFail = 1,
    kUsage = 2,
    kUnsupported = 3,
    kInconclusive = 4,
};

// Runs one command; args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace lsde::cli
