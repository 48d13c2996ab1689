#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace mvs::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;

/// Entry point of the `mvs` tool. args[0] is the program name. Results go to
/// out, diagnostics to err. Returns kExitOk, kExitUsage or kExitData.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace mvs::cli
