#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace linkpred::cli {

/// Exit statuses. Library errors map by category.
enum ExitCode : int {
    exit_ok = 0,
    exit_usage = 2,
    exit_parse = 3,
    exit_validation = 4,
    exit_io = 5,
    exit_numeric = 6,
};

/// Runs one command line (without the program name). `-` as a path means
/// `in` or `out`. Log lines and errors go to `err`.
int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace linkpred::cli
