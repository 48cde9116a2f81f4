#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "commands.hpp"

namespace phiproj::cli {

struct ManifestJob {
  std::string data;
  std::string config;
  std::string output;  ///< empty: report only in the summary
};

/// {"jobs": [{"data": ..., "config": ..., "output": ...}, ...]}. Relative
/// paths are resolved against the manifest's directory.
std::vector<ManifestJob> load_manifest(const std::string& path);

struct ManifestOutcome {
  nlohmann::json summary;  ///< one entry per job, in manifest order
  int exit_code = kExitConverged;  ///< largest job exit code
};

/// Runs every job through cmd_project on up to `jobs` worker threads. A
/// failing job is recorded in the summary and does not stop the others.
ManifestOutcome run_manifest(const std::vector<ManifestJob>& jobs, unsigned workers,
                             const Overrides& overrides);

}  // namespace phiproj::cli
