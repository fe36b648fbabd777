#pragma once

#include <iosfwd>
#include <string>

#include "novikov/config.hpp"

namespace novikov {

/// Exit statuses shared by the command drivers and the CLI.
enum ExitStatus : int { exit_pass = 0, exit_failure = 1, exit_config = 2 };

/// Each driver writes its artifacts under out_dir (created if missing) and
/// diagnostics to diag. Library errors are mapped to exit statuses:
/// config-type errors to exit_config, everything else to exit_failure.

/// energies.csv, snapshot_<k>.csv, summary.json.
int cmd_run(const RunConfig& config, const std::string& out_dir, std::ostream& diag);

/// trace_<j>.csv per y_bar and trace_summary.json.
int cmd_trace(const RunConfig& config, const std::string& out_dir, std::ostream& diag);

/// compare.json: main pipeline against the physical-space reference, the
/// beta-frame solver and (peakon) the closed form, over the compare.N ladder.
int cmd_compare(const RunConfig& config, const std::string& out_dir, std::ostream& diag);

/// perturb.json: sup difference on a window between the base run and runs of
/// the perturbed datum for each delta.
int cmd_perturb(const RunConfig& config, const std::string& out_dir, std::ostream& diag);

/// Dispatch by name ("run", "trace", "compare", "perturb"); exit_config for
/// an unknown name.
int run_command(const std::string& name, const RunConfig& config, const std::string& out_dir,
                std::ostream& diag);

}  // namespace novikov
