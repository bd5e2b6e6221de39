#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace xdalign::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitStageFailure = 1;
inline constexpr int kExitUsage = 2;

// Entry point for the xdalign command. args[0] is the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace xdalign::cli
