#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "efp/cloud_worker.hpp"

namespace efp::cli {

/// Process exit codes shared by every subcommand.
enum ExitCode : int {
  kOk = 0,
  kVerificationFailed = 1,
  kUsageError = 2,
  kNoResult = 3,
};

/// honest | random:SEED | perturb:ROW,COL,DELTA | truncate:ROWS
CloudBehavior parse_adversary(const std::string& text);

/// Runs `efp <args...>`; args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace efp::cli
