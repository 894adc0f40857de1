#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace agm::cli {

/// Runs one command line (without the program name) and returns its exit code:
/// 0 ok, 1 verification failure, 2 usage or precondition error, 3 flagged
/// discrepancy.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace agm::cli
