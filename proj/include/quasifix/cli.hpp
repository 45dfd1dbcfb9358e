#pragma once

#include <string>
#include <vector>

namespace quasifix {

/// Runs one CLI command. `args` starts at the subcommand (verify, iterate,
/// attractor, hausdorff, preset). Returns the process exit code:
///   0  all requested checks passed / the run converged
///   2  a check failed or a run did not converge
///   1  usage or config error
int run(const std::vector<std::string>& args);

}  // namespace quasifix
