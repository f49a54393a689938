#pragma once

#include <iosfwd>
#include <span>
#include <string>

namespace mixlens::cli {

enum ExitCode : int {
  kOk = 0,
  kFailure = 1,
  kUsage = 2,
  kRefusedOverwrite = 3,
  kMismatch = 4,
  kBadReportInput = 5,
};

/// Entry point behind the `mixlens` binary. `args` excludes the program name.
int run(std::span<const std::string> args, std::ostream& out, std::ostream& err);

}  // namespace mixlens::cli
