#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace denjoy::cli {

enum ExitCode : int {
  kOk = 0,
  kInputError = 2,
  kHypothesisFailure = 3,
  kNoLoop = 4,
  kConstructionFailure = 5,
};

// Runs the command line `args` (args[0] is the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace denjoy::cli
