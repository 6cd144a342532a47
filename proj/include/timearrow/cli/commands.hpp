#pragma once

// Subcommands of the timearrow tool. Each writes CSV to `out`: a
// "# config: {...}" line with the resolved configuration, then one or more
// tables, each introduced by a "# block: <name>" line.

#include <iosfwd>
#include <string>
#include <vector>

#include "timearrow/cli/run_config.hpp"

namespace timearrow::cli {

/// Invariants checked while producing the output. A command with failures
/// still writes its data; the tool then exits with status 1.
struct CommandStatus {
  std::vector<std::string> failures;
  bool ok() const { return failures.empty(); }
};

/// t, <M_F>, <M_B> and the oracle value over the configured time window.
CommandStatus cmd_trace(const RunConfig& config, std::ostream& out);
/// Position and m-density frames at config.frame_times, with <M_F> per frame.
CommandStatus cmd_frames(const RunConfig& config, std::ostream& out);
/// Free versus delta-potential dynamics for each coupling.
CommandStatus cmd_equiv(const RunConfig& config, std::ostream& out);
/// <T(t)> for the level set config.levels, and the proportionality of the
/// discretized 2 M_F - 1 to T.
CommandStatus cmd_galapon(const RunConfig& config, std::ostream& out);

/// Shortest round-trip decimal form.
std::string format_number(double value);

}  // namespace timearrow::cli
