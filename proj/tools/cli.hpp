#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace eprbm::cli {

enum ExitCode : int {
  kSuccess = 0,
  kFailure = 1,
  kUsage = 2,
  kDataError = 3,
  kDivergence = 4,
};

/// Runs one eprbm command. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace eprbm::cli
