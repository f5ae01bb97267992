#pragma once

#include <string>

#include "config.hpp"

namespace sadet::cli {

struct RunResult {
  int exit_status{0};
  std::string report_path;
};

/// Executes one configured run end to end: data acquisition (simulation or
/// CSV ingest), the selected detection/identification mode, and report and
/// plot-data emission under config.out_dir. Exit status 0 means no attack,
/// 1 means attack.
RunResult run(const RunConfig& config);

}  // namespace sadet::cli
