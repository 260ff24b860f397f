#include "omds/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "omds/channel.hpp"
#include "omds/constants.hpp"
#include "omds/txgen.hpp"
#include "parallel.hpp"

namespace omds {

namespace {

using nlohmann::json;

[[noreturn]] void config_fail(const std::string& what) {
  fail(ErrorCode::ConfigError, what);
}

json require(const json& j, const char* key) {
  if (!j.contains(key)) config_fail(std::string("missing config key: ") + key);
  return j.at(key);
}

Vec3 parse_vec3(const json& j, const char* key) {
  const json v = require(j, key);
  if (!v.is_array() || v.size() != 3) {
    config_fail(std::string(key) + " must be a 3-element array");
  }
  return {v[0].get<double>(), v[1].get<double>(), v[2].get<double>()};
}

ExportFormat parse_format(const std::string& name) {
  if (name == "bin") return ExportFormat::Bin;
  if (name == "csv") return ExportFormat::Csv;
  if (name == "pgm") return ExportFormat::Pgm;
  config_fail("unknown output format: " + name);
}

WaveformConfig parse_waveform(const json& j) {
  WaveformConfig w;
  w.carrier_frequency = require(j, "carrier_frequency_hz").get<double>();
  w.bandwidth = require(j, "bandwidth_hz").get<double>();
  w.subcarriers = require(j, "subcarriers").get<std::uint32_t>();
  w.symbols_per_frame = j.value<std::uint32_t>("symbols_per_frame", 1);
  w.packages = require(j, "packages").get<std::uint32_t>();
  w.cp_duration = require(j, "cp_duration_s").get<double>();
  w.package_interval = require(j, "package_interval_s").get<double>();
  const std::string alphabet = j.value<std::string>("alphabet", "qpsk");
  if (alphabet == "qpsk" || alphabet == "4qam") {
    w.alphabet = Alphabet::Qpsk;
  } else if (alphabet == "bpsk") {
    w.alphabet = Alphabet::Bpsk;
  } else if (alphabet == "16qam") {
    w.alphabet = Alphabet::Qam16;
  } else {
    config_fail("unknown alphabet: " + alphabet);
  }
  w.seed = j.value<std::uint64_t>("seed", 1);
  if (j.contains("noise")) {
    const json n = j.at("noise");
    w.noise.enabled = n.value<bool>("enabled", true);
    w.noise.snr_db = require(n, "snr_db").get<double>();
    w.noise.seed = n.value<std::uint64_t>("seed", w.seed);
  }
  return w;
}

StftConfig parse_stft(const json& j) {
  StftConfig s;
  s.fft_length = require(j, "fft_length").get<std::uint32_t>();
  s.window_length = j.value<std::uint32_t>("window_length", s.fft_length);
  s.hop = require(j, "hop").get<std::uint32_t>();
  const std::string window = j.value<std::string>("window", "gaussian");
  if (window == "gaussian") {
    s.window = StftWindow::Gaussian;
  } else if (window == "rectangular") {
    s.window = StftWindow::Rectangular;
  } else if (window == "hann") {
    s.window = StftWindow::Hann;
  } else {
    config_fail("unknown STFT window: " + window);
  }
  s.gaussian_std = j.value<double>("gaussian_std", 0.0);
  return s;
}

bool wants(const std::vector<ExportFormat>& formats, ExportFormat f) {
  return std::find(formats.begin(), formats.end(), f) != formats.end();
}

RealMatrix map_matrix(const RangeDopplerMap& map) {
  return {map.power, map.range_bins, map.velocity_bins};
}

RealMatrix spectrogram_matrix(const Spectrogram& spec) {
  return {spec.power, spec.doppler_bins, spec.frames};
}

class ArtifactWriter {
 public:
  ArtifactWriter(std::filesystem::path dir, std::vector<ExportFormat> formats)
      : dir_(std::move(dir)), formats_(std::move(formats)) {}

  template <typename Matrix>
  void matrix(const std::string& stem, const Matrix& m) {
    if (wants(formats_, ExportFormat::Bin)) {
      write_matrix_bin(dir_ / (stem + ".bin"), m);
      record(stem + ".bin");
    }
    if (wants(formats_, ExportFormat::Csv)) {
      write_matrix_csv(dir_ / (stem + ".csv"), m);
      record(stem + ".csv");
    }
  }

  void pgm(const std::string& stem, const Spectrogram& spec) {
    if (wants(formats_, ExportFormat::Pgm)) {
      write_spectrogram_pgm(dir_ / (stem + ".pgm"), spec);
      record(stem + ".pgm");
    }
  }

  void text(const std::string& name, const std::string& content) {
    std::ofstream os(dir_ / name);
    if (!os) fail(ErrorCode::IoFailure, "cannot write " + (dir_ / name).string());
    os << content;
    os.close();
    record(name);
  }

  void record(const std::string& name) {
    const auto path = dir_ / name;
    entries_.push_back({name, std::filesystem::file_size(path), fnv1a64_file(path)});
  }

  std::vector<ManifestEntry> finish() {
    std::sort(entries_.begin(), entries_.end(),
              [](const ManifestEntry& a, const ManifestEntry& b) { return a.name < b.name; });
    write_manifest(dir_ / "manifest.txt", entries_);
    return entries_;
  }

 private:
  std::filesystem::path dir_;
  std::vector<ExportFormat> formats_;
  std::vector<ManifestEntry> entries_;
};

struct FeatureReport {
  TargetEstimate estimate;
  std::uint32_t selected_range_bin = 0;
  double max_doppler_hz = 0.0;
  bool rotation_requested = false;
  std::optional<double> rotation_rate;
  std::optional<double> blade_length;
};

std::string render_report(const FeatureReport& r) {
  std::ostringstream os;
  os << "range_hat_m = " << format_double(r.estimate.range) << '\n'
     << "velocity_hat_mps = " << format_double(r.estimate.velocity) << '\n'
     << "peak_power = " << format_double(r.estimate.peak_power) << '\n'
     << "peak_range_bin = " << r.estimate.peak_range_bin << '\n'
     << "peak_velocity_bin = " << r.estimate.peak_velocity_bin << '\n'
     << "selected_range_bin = " << r.selected_range_bin << '\n'
     << "max_doppler_hz = " << format_double(r.max_doppler_hz) << '\n';
  if (!r.rotation_requested) {
    os << "rotation_status = not_requested\n";
  } else if (r.rotation_rate) {
    os << "rotation_status = ok\n"
       << "rotation_rate_rps = " << format_double(*r.rotation_rate) << '\n';
    if (r.blade_length) {
      os << "blade_length_m = " << format_double(*r.blade_length) << '\n';
    }
  } else {
    os << "rotation_status = no_periodicity\n";
  }
  return os.str();
}

// estimate + micro-Doppler stages shared by run_scenario and analyze_channel.
RunResult analyze_matrix(const FrameMatrix& channel, const ScenarioConfig& scenario,
                         const WaveformConfig& cfg,
                         const std::filesystem::path& out_dir,
                         const std::vector<ExportFormat>& formats,
                         bool export_channel) {
  const RangeDopplerMap map =
      periodogram(channel, scenario.range_fft, scenario.doppler_fft, cfg);
  const TargetEstimate estimate = estimate_target(map);

  std::uint32_t selected_bin = 0;
  const std::vector<cplx> series =
      slow_time_series(channel, scenario.slow_time_mode, &selected_bin);
  const Spectrogram linear =
      stft_spectrogram(series, scenario.stft, slow_time_spacing(cfg));
  const Spectrogram db = to_db(linear, scenario.floor_db);

  FeatureReport report;
  report.estimate = estimate;
  report.selected_range_bin = selected_bin;
  report.max_doppler_hz = max_doppler(db, scenario.features.max_doppler_threshold_db);
  report.rotation_requested = scenario.features.n_blades > 0;
  if (report.rotation_requested) {
    try {
      report.rotation_rate = estimate_rotation_rate(db, scenario.features.n_blades);
      report.blade_length = estimate_blade_length(
          report.max_doppler_hz, *report.rotation_rate, cfg.carrier_frequency);
    } catch (const SimError& e) {
      if (e.code() != ErrorCode::NoPeriodicity) throw;
    }
  }

  std::filesystem::create_directories(out_dir);
  ArtifactWriter writer(out_dir, formats);
  if (export_channel) writer.matrix("channel_matrix", channel);
  writer.matrix("range_doppler", map_matrix(map));
  writer.matrix("spectrogram_linear", spectrogram_matrix(linear));
  writer.matrix("spectrogram_db", spectrogram_matrix(db));
  writer.pgm("spectrogram_db", db);
  writer.text("features.txt", render_report(report));

  RunResult result;
  result.estimate = estimate;
  result.selected_range_bin = selected_bin;
  result.max_doppler_hz = report.max_doppler_hz;
  result.rotation_rate = report.rotation_rate;
  result.blade_length = report.blade_length;
  result.rotation_requested = report.rotation_requested;
  result.manifest = writer.finish();
  result.out_dir = out_dir;
  return result;
}

}  // namespace

ScenarioConfig load_scenario(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) config_fail("cannot open config: " + path.string());
  json j;
  try {
    is >> j;
  } catch (const json::exception& e) {
    config_fail("config parse error in " + path.string() + ": " + e.what());
  }

  try {
    ScenarioConfig s;
    s.base_dir = path.has_parent_path() ? path.parent_path() : ".";
    s.waveform = parse_waveform(require(j, "waveform"));

    const json t = require(j, "target");
    const std::string type = require(t, "type").get<std::string>();
    if (type == "point") {
      PointTargetSpec p;
      p.range = require(t, "range_m").get<double>();
      p.velocity = t.value<double>("velocity_mps", 0.0);
      p.reflectivity = t.value<double>("reflectivity", 1.0);
      if (p.range <= 0.0) config_fail("point target range_m must be positive");
      s.target = p;
    } else if (type == "fan") {
      FanTargetSpec f;
      f.fan.center = parse_vec3(t, "center_m");
      f.fan.blade_length = require(t, "blade_length_m").get<double>();
      f.fan.angular_velocity =
          2.0 * kPi * require(t, "rotations_per_second").get<double>();
      f.fan.initial_phase = t.value<double>("initial_phase_rad", 0.0);
      f.fan.blade_reflectivity = t.value<double>("blade_reflectivity", 1.0);
      f.fan.hub_reflectivity = t.value<double>("hub_reflectivity", 2.0);
      f.tx_position = t.contains("tx_position_m") ? parse_vec3(t, "tx_position_m") : Vec3{};
      s.target = f;
    } else if (type == "human") {
      HumanTargetSpec h;
      h.track_path = require(t, "track_path").get<std::string>();
      h.skeleton_path = require(t, "skeleton_path").get<std::string>();
      h.tx_position = parse_vec3(t, "tx_position_m");
      s.target = h;
    } else {
      config_fail("unknown target type: " + type);
    }

    const json p = require(j, "periodogram");
    s.range_fft = require(p, "range_fft").get<std::uint32_t>();
    s.doppler_fft = require(p, "doppler_fft").get<std::uint32_t>();

    s.stft = parse_stft(require(j, "stft"));

    const std::string mode = j.value<std::string>("slow_time_mode", "peak_range_bin");
    if (mode == "peak_range_bin") {
      s.slow_time_mode = SlowTimeMode::PeakRangeBin;
    } else if (mode == "sum_subcarriers") {
      s.slow_time_mode = SlowTimeMode::SumSubcarriers;
    } else {
      config_fail("unknown slow_time_mode: " + mode);
    }

    if (j.contains("features")) {
      const json f = j.at("features");
      s.features.n_blades = f.value<int>("n_blades", 0);
      s.features.max_doppler_threshold_db = f.value<double>("max_doppler_threshold_db", 10.0);
    }

    if (j.contains("outputs")) {
      const json o = j.at("outputs");
      if (o.contains("directory")) {
        s.outputs.directory = o.at("directory").get<std::string>();
      }
      if (o.contains("formats")) {
        s.outputs.formats.clear();
        for (const auto& f : o.at("formats")) {
          s.outputs.formats.push_back(parse_format(f.get<std::string>()));
        }
      }
    }

    s.floor_db = j.value<double>("floor_db", -40.0);

    if (j.contains("reference_values")) {
      for (const auto& [key, value] : j.at("reference_values").items()) {
        s.reference_values[key] = value.get<double>();
      }
    }

    validate_config(s.waveform);
    return s;
  } catch (const json::exception& e) {
    config_fail("config field error in " + path.string() + ": " + e.what());
  } catch (const SimError& e) {
    if (e.code() == ErrorCode::ConfigError) throw;
    config_fail("invalid configuration in " + path.string() + ": " + e.what());
  }
}

std::vector<ScatterSnapshot> build_snapshots(const ScenarioConfig& scenario,
                                             const WaveformConfig& cfg) {
  const std::uint64_t n_cols = cfg.columns();
  std::vector<ScatterSnapshot> snaps(n_cols);

  if (const auto* point = std::get_if<PointTargetSpec>(&scenario.target)) {
    // Reference epoch at the CPI midpoint: the configured range is the
    // range when half the observation has elapsed.
    const double t_mid = column_time(cfg, n_cols - 1) / 2.0;
    for (std::uint64_t c = 0; c < n_cols; ++c) {
      const double t = column_time(cfg, c);
      snaps[c] = point_target_snapshot(point->range + point->velocity * t_mid,
                                       -point->velocity, t, point->reflectivity);
    }
    return snaps;
  }

  if (const auto* fan = std::get_if<FanTargetSpec>(&scenario.target)) {
    for (std::uint64_t c = 0; c < n_cols; ++c) {
      snaps[c] = fan_snapshot(fan->fan, fan->tx_position, column_time(cfg, c));
    }
    return snaps;
  }

  const auto& human_spec = std::get<HumanTargetSpec>(scenario.target);
  auto resolve = [&](const std::filesystem::path& p) {
    return p.is_absolute() ? p : scenario.base_dir / p;
  };
  HumanTarget human;
  human.track = read_motion_track(resolve(human_spec.track_path));
  human.primitives = read_skeleton(resolve(human_spec.skeleton_path));
  human.tx_position = human_spec.tx_position;
  const double slow_rate = 1.0 / slow_time_spacing(cfg);
  if (slow_rate > human.track.sample_rate) {
    human.track = resample_track(human.track, slow_rate);
  }
  validate_human(human);
  if (column_time(cfg, n_cols - 1) > human.track.duration() + 1e-9) {
    fail(ErrorCode::TimeOutOfRange, "track shorter than the coherent processing interval");
  }
  for (std::uint64_t c = 0; c < n_cols; ++c) {
    snaps[c] = human_snapshot(human, column_time(cfg, c));
  }
  return snaps;
}

RunResult run_scenario(const ScenarioConfig& scenario, const RunOptions& options) {
  WaveformConfig cfg = scenario.waveform;
  if (options.seed) {
    cfg.seed = *options.seed;
    cfg.noise.seed = *options.seed;
  }
  cfg = validate_config(cfg);

  const auto out_dir = options.out_dir.value_or(scenario.outputs.directory);
  const auto formats = options.formats.value_or(scenario.outputs.formats);

  // Inputs are loaded and validated before any output is created, so a
  // failing run leaves no partial artifact tree.
  const std::vector<ScatterSnapshot> snapshots = build_snapshots(scenario, cfg);
  const FrameMatrix tx = generate_tx_frame(cfg, SymbolAlphabet::from(cfg.alphabet),
                                           cfg.seed, options.threads);
  const FrameMatrix rx = synthesize_rx(tx, snapshots, cfg, cfg.noise, options.threads);
  const FrameMatrix channel = channel_matrix(rx, tx);
  return analyze_matrix(channel, scenario, cfg, out_dir, formats, true);
}

RunResult analyze_channel(const ScenarioConfig& scenario,
                          const std::filesystem::path& channel_bin,
                          const RunOptions& options) {
  const WaveformConfig cfg = validate_config(scenario.waveform);
  const FrameMatrix channel = read_frame_matrix_bin(channel_bin);
  if (channel.rows() != cfg.subcarriers || channel.cols() != cfg.columns()) {
    fail(ErrorCode::DimensionMismatch, "saved channel matrix does not match the config grid");
  }
  const auto out_dir = options.out_dir.value_or(scenario.outputs.directory);
  const auto formats = options.formats.value_or(scenario.outputs.formats);
  return analyze_matrix(channel, scenario, cfg, out_dir, formats, false);
}

std::string scenario_info(const ScenarioConfig& scenario) {
  const WaveformConfig cfg = validate_config(scenario.waveform);
  const ResolutionReport r = resolution_report(cfg);
  std::ostringstream os;
  os << "carrier_frequency_hz = " << format_double(cfg.carrier_frequency) << '\n'
     << "bandwidth_hz = " << format_double(cfg.bandwidth) << '\n'
     << "subcarriers = " << cfg.subcarriers << '\n'
     << "symbols_per_frame = " << cfg.symbols_per_frame << '\n'
     << "packages = " << cfg.packages << '\n'
     << "subcarrier_spacing_hz = " << format_double(cfg.subcarrier_spacing) << '\n'
     << "symbol_duration_s = " << format_double(cfg.symbol_duration) << '\n'
     << "cp_duration_s = " << format_double(cfg.cp_duration) << '\n'
     << "ofdm_duration_s = " << format_double(cfg.ofdm_duration) << '\n'
     << "package_interval_s = " << format_double(cfg.package_interval) << '\n'
     << "range_resolution_m = " << format_double(r.range_resolution) << '\n'
     << "velocity_resolution_frame_mps = " << format_double(r.velocity_resolution_frame) << '\n'
     << "velocity_resolution_packaged_mps = " << format_double(r.velocity_resolution_packaged) << '\n'
     << "max_velocity_mps = " << format_double(r.max_velocity) << '\n'
     << "max_range_m = " << format_double(r.max_range) << '\n'
     << "max_doppler_hz = " << format_double(r.max_doppler) << '\n'
     << "doppler_at_10mps_hz = "
     << format_double(doppler_shift(10.0, cfg.carrier_frequency)) << '\n';

  const std::map<std::string, double> computed{
      {"range_resolution_m", r.range_resolution},
      {"velocity_resolution_mps", r.velocity_resolution_packaged},
      {"max_velocity_mps", r.max_velocity},
      {"max_doppler_hz", r.max_doppler},
  };
  for (const auto& [key, declared] : scenario.reference_values) {
    const auto it = computed.find(key);
    if (it == computed.end()) {
      os << "note: no computed counterpart for reference " << key << '\n';
    } else if (std::abs(it->second - declared) > 0.01 * std::abs(declared)) {
      os << "note: " << key << " computed " << format_double(it->second)
         << " differs from declared reference " << format_double(declared) << '\n';
    }
  }
  return os.str();
}

}  // namespace omds
