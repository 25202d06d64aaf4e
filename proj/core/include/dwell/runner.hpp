#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dwell/config.hpp"

namespace dwell {

std::string_view version() noexcept;

struct RunOptions {
  /// Overrides output.dir from the config.
  std::optional<std::filesystem::path> output_dir;
  /// Worker threads for independent sweep points; results are merged by index.
  unsigned jobs = 1;
  /// Progress messages; nullptr for silence.
  std::ostream* log = nullptr;
};

struct RunResult {
  std::filesystem::path output_dir;
  /// Artifacts in write order, manifest.json excluded (it is written last).
  std::vector<std::string> files;
  std::uint64_t config_hash = 0;
};

/// Runs the configured experiment and writes its artifacts plus manifest.json.
/// Module errors propagate with the experiment name prepended; I/O failures
/// raise IoError.
RunResult run_experiment(const ExperimentConfig& config, const RunOptions& options = {});

/// Mean over consecutive windows of length `period` of half the peak-to-peak
/// excursion of `values` (windows shorter than a full period are dropped).
double mean_cycle_amplitude(const std::vector<double>& times, const std::vector<double>& values, double period);

}  // namespace dwell
