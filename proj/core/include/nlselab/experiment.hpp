#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace nlselab {

inline constexpr const char* kArtifactVersion = "0.1.0";

/// Stable, alphabetized experiment catalog: (name, one-line description).
const std::vector<std::pair<std::string, std::string>>& experiment_catalog();

struct RunOptions {
  std::optional<std::filesystem::path> output_dir;  // --out override
  std::optional<uint64_t> seed;                     // --seed override
  bool quiet = false;
};

/// Execute the experiment described by a JSON config file. Writes
/// summary.json, series.csv and field snapshots into the output directory.
/// Returns the process exit status: 0 all configured checks passed,
/// 1 checks failed, 2 configuration error, 3 numerical failure.
int run_experiment(const std::filesystem::path& config_path,
                   const RunOptions& options);

}  // namespace nlselab
