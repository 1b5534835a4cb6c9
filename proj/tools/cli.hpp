#pragma once

// Command-line front end. Exit codes: 0 success, 1 predicate false,
// 2 parse or usage error, 3 numeric failure.

#include <ostream>
#include <string>
#include <vector>

namespace g2lcc::cli {

/// `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace g2lcc::cli
