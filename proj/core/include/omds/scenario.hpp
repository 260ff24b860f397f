#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "omds/estimate.hpp"
#include "omds/io.hpp"
#include "omds/microdoppler.hpp"
#include "omds/params.hpp"
#include "omds/scene.hpp"

namespace omds {

struct PointTargetSpec {
  double range = 0.0;         // at the CPI midpoint
  double velocity = 0.0;      // positive toward the transceiver
  double reflectivity = 1.0;
};

struct FanTargetSpec {
  FanTarget fan;
  Vec3 tx_position;
};

struct HumanTargetSpec {
  std::filesystem::path track_path;
  std::filesystem::path skeleton_path;
  Vec3 tx_position;
};

struct FeatureSpec {
  int n_blades = 0;  // > 0 enables rotation and blade-length estimation
  double max_doppler_threshold_db = 10.0;
};

enum class ExportFormat { Bin, Csv, Pgm };

struct OutputSpec {
  std::filesystem::path directory = "out";
  std::vector<ExportFormat> formats = {ExportFormat::Bin, ExportFormat::Csv};
};

struct ScenarioConfig {
  WaveformConfig waveform;
  std::variant<PointTargetSpec, FanTargetSpec, HumanTargetSpec> target;
  std::uint32_t range_fft = 0;    // K
  std::uint32_t doppler_fft = 0;  // H
  StftConfig stft;
  SlowTimeMode slow_time_mode = SlowTimeMode::PeakRangeBin;
  FeatureSpec features;
  OutputSpec outputs;
  double floor_db = -40.0;
  std::map<std::string, double> reference_values;  // declared nominal values
  std::filesystem::path base_dir;  // resolves relative target paths
};

/// Parses and validates a JSON scenario file (schema in the README).
/// Throws SimError with ErrorCode::ConfigError on malformed input.
ScenarioConfig load_scenario(const std::filesystem::path& path);

struct RunOptions {
  std::optional<std::filesystem::path> out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<std::vector<ExportFormat>> formats;
  unsigned threads = 1;
};

struct RunResult {
  TargetEstimate estimate;
  std::uint32_t selected_range_bin = 0;
  double max_doppler_hz = 0.0;
  std::optional<double> rotation_rate;  // empty: not requested or aperiodic
  std::optional<double> blade_length;
  bool rotation_requested = false;
  std::vector<ManifestEntry> manifest;
  std::filesystem::path out_dir;
};

/// One scatter snapshot per slow-time column for the configured target.
/// Point targets are referenced to the CPI midpoint; human tracks are
/// resampled to the slow-time rate first.
std::vector<ScatterSnapshot> build_snapshots(const ScenarioConfig& scenario,
                                             const WaveformConfig& cfg);

/// Full pipeline: tx frame, backscatter, channel matrix, range-Doppler map,
/// spectrogram, features, artifacts and manifest. Artifact bytes depend
/// only on (config, seed); thread count never changes them.
RunResult run_scenario(const ScenarioConfig& scenario, const RunOptions& options = {});

/// estimate + micro-Doppler stages on a previously saved channel matrix.
RunResult analyze_channel(const ScenarioConfig& scenario,
                          const std::filesystem::path& channel_bin,
                          const RunOptions& options = {});

/// Resolution and ambiguity report as labeled key/value lines, with notes
/// where computed values disagree with declared reference_values.
std::string scenario_info(const ScenarioConfig& scenario);

}  // namespace omds
