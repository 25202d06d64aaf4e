#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dwell/grid.hpp"
#include "dwell/potential.hpp"

namespace dwell {

enum class ExperimentKind { eigen, evolve, ansatz, duffing, epsilon, poposc, crossover };

struct ExperimentInfo {
  ExperimentKind kind;
  std::string_view name;
  std::string_view summary;
};

/// All named experiments in listing order.
const std::vector<ExperimentInfo>& experiments();
std::string_view experiment_name(ExperimentKind kind) noexcept;

enum class DriveKindConfig { none, sinusoid, replay };

struct DriveConfig {
  DriveKindConfig kind = DriveKindConfig::none;
  double amplitude = 0.0;
  double omega = 0.0;
  double offset = 0.0;
  double phase = 0.0;
  /// Replay source: CSV with a header containing `t` and `q` columns.
  std::string file;
  friend bool operator==(const DriveConfig&, const DriveConfig&) = default;
};

struct RunSettings {
  double dt = 0.001;
  double t_end = 50.0;
  std::size_t sample_every = 10;
  friend bool operator==(const RunSettings&, const RunSettings&) = default;
};

struct InitialSettings {
  double n1 = 1.0;
  double n2 = 0.0;
  double epsilon = 0.0;
  std::optional<double> x;  // centroid start; defaults to the right well minimum
  double v = 0.0;
  double pop_diff = 1.0;
  double rate = 0.0;
  friend bool operator==(const InitialSettings&, const InitialSettings&) = default;
};

enum class SweepParam { none, amplitude, omega, x0, ensemble };

struct SweepSettings {
  SweepParam param = SweepParam::none;
  std::vector<double> values;
  std::size_t count = 0;  // ensemble size
  double min = 0.0;       // ensemble x0 range
  double max = 0.0;
  friend bool operator==(const SweepSettings&, const SweepSettings&) = default;
};

struct LyapunovSettings {
  std::size_t renorm_every = 10;
  double delta0 = 1e-8;
  std::optional<double> t_end;  // defaults to run.t_end
  friend bool operator==(const LyapunovSettings&, const LyapunovSettings&) = default;
};

struct CrossoverSettings {
  double displacement = 1.0;                  // initial epsilon in units of b0
  double short_periods = 20.0;                // well periods
  double long_periods = 3.0;                  // tunneling periods
  double long_dt = 0.05;
  std::size_t long_sample_every = 20;
  double lyapunov_periods = 20000.0;  // fast-drive periods
  double lyapunov_dt = 0.01;
  double x0 = 0.1;
  bool replay = true;
  friend bool operator==(const CrossoverSettings&, const CrossoverSettings&) = default;
};

struct ExperimentConfig {
  ExperimentKind experiment = ExperimentKind::eigen;
  std::uint64_t seed = 0;
  SystemParams params;
  std::optional<GridSpec> grid;
  DriveConfig drive;
  RunSettings run;
  std::string output_dir = "out";
  InitialSettings initial;
  std::size_t eigen_k = 4;
  std::vector<double> ansatz_hbar;
  SweepSettings sweep;
  LyapunovSettings lyapunov;
  CrossoverSettings crossover;
  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

/// Parses and validates the line-oriented `section.key = value` format.
/// Throws ConfigError naming the key (and line) on any problem.
ExperimentConfig validate_config(std::string_view text);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Canonical text form; validate_config(serialize(c)) == c.
std::string serialize(const ExperimentConfig& config);

/// Grid used by quantum experiments: the configured one, or [-4a, 4a] with
/// 2048 points where a = 1/sqrt(lambda).
GridSpec effective_grid(const ExperimentConfig& config);

/// FNV-1a 64-bit hash of the canonical form, output.dir excluded.
std::uint64_t config_hash(const ExperimentConfig& config);

}  // namespace dwell
