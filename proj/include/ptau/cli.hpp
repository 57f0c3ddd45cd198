#pragma once

// Command dispatch shared by the binary and the tests.

#include "report.hpp"

namespace ptau {

// Executes the verb named in the config; config_dir resolves relative paths
// in suite manifests.
Report run_config(const RunConfig& rc, const std::string& config_dir, bool accept_baselines);

// Full command line: --config PATH [--out PATH] [--seed N] [--accept-baselines].
// Returns the process exit code (0 pass, 1 fail, 2 precision-inconclusive,
// 3 usage error).
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ptau
