#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "cli_config.hpp"

namespace lclab::cli {

struct RunOptions {
  std::string out_dir = ".";
  std::string format;  // "", "json", or "csv"
  int jobs = 1;
  std::optional<double> tol;  // overrides quadrature rel_tol
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitDomainError = 2;
inline constexpr int kExitDivergence = 3;
inline constexpr int kExitTolerance = 4;

/// Dispatches one command against a parsed configuration, writes the report
/// file into out_dir, and returns the process exit code. Log lines
/// (summary + output path) go to `log`.
int run_command(Command cmd, const nlohmann::json& config_json, const RunOptions& options,
                std::ostream& log);

}  // namespace lclab::cli
