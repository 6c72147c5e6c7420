#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace jewel {

/// Runs the command-line surface. Exit codes: 0 success or positive verdict,
/// 1 computed negative verdict, 2 usage or I/O error, 3 numerical failure.
/// The environment variable JEWEL_SOLVER_TOL overrides the solver's default
/// 1e-8 gap/feasibility tolerance.
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

}  // namespace jewel
