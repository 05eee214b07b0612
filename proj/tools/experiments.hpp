#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "config.hpp"

namespace netent::cli {

struct RunResult {
  std::vector<std::string> files;       // written artifacts, relative to the output dir
  std::vector<std::string> violations;  // named invariant failures
};

// Runs one experiment and writes its artifacts plus manifest.json into
// out_dir. Input problems throw ValidationError; invariant failures are
// reported in the result after the artifacts are written.
RunResult run_experiment(const ExperimentConfig& cfg, const std::filesystem::path& out_dir);

// Writes through a temporary file in the same directory and renames it.
void write_atomic(const std::filesystem::path& path, const std::string& contents);

// Output directory: NETENT_OUTPUT_DIR if set, else the config's output_dir
// resolved against the config location.
std::filesystem::path resolve_output_dir(const ExperimentConfig& cfg);

}  // namespace netent::cli
