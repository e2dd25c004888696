// Command-line driver, callable in-process for testing.
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace covplan::cli {

// Runs the driver on the given arguments (argv[0] excluded), writing
// regular output to `out` and diagnostics to `err`. Exit codes: 0 success,
// 1 usage error, 2 configuration or map error, 3 soundness failure
// (broken invariant, protocol violation, or a failed audit).
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

}  // namespace covplan::cli
