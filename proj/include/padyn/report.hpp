#pragma once

// Subcommand orchestration and the canonical JSON / text reports.

#include <optional>
#include <string>

#include "padyn/parser.hpp"

namespace padyn {

enum class ExitCode { Ok = 0, Usage = 1, Rejected = 2, Precision = 3 };

struct RunOptions {
  std::optional<int> precision;
  std::optional<int> val_floor;
  std::optional<std::string> point;  // decompose: a point on the cycle ("3", "-1/4", "inf", "(1,3)")
  std::optional<int> shell_period_cap;
  bool json = false;
};

struct RunResult {
  ExitCode code = ExitCode::Ok;
  std::string output;  // report (may be present with Rejected)
  std::string error;
};

inline constexpr const char* kVersion = "0.4.1";

/// analyze | enumerate | decompose | verify | cubic
RunResult run(const std::string& subcommand, const MapDescription& desc, const RunOptions& opts);
RunResult run_text(const std::string& subcommand, const std::string& file_text, const RunOptions& opts);

ExitCode exit_code_for(ErrorCode code);

}  // namespace padyn
