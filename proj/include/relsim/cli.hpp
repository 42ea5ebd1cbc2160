#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace relsim::cli {

inline constexpr std::string_view kToolVersion = "0.1.0";

enum ExitCode : int {
    kOk = 0,
    kUsage = 1,
    kData = 2,
    kProvider = 3,
};

/// Runs one `relsim` invocation. args[0] is the program name. Outputs are
/// written atomically, each with a `<out>.manifest.json` next to it.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace relsim::cli
