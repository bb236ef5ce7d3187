#pragma once

#include <iosfwd>

namespace ttsched {

/// Exit codes of the command-line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitViolations = 1;
inline constexpr int kExitConfig = 2;

/// Entry point of the `ttsched` tool, writing to the given streams.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace ttsched
