#pragma once

#include <string>
#include <vector>

namespace lvar::cli {

enum ExitCode : int { kOk = 0, kSchema = 2, kContract = 3, kNumeric = 4 };

struct RunResult {
  int exit_code = kOk;
  /// Complete output document; empty on failure.
  std::string out;
  /// One JSON object with a "reason" field on failure.
  std::string err;
};

/// Runs one invocation. args excludes the program name.
RunResult run(const std::vector<std::string>& args);

}  // namespace lvar::cli
