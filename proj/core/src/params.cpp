#include "omds/params.hpp"

#include <cmath>
#include <string>

#include "omds/constants.hpp"

namespace omds {

namespace {

void require_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    fail(ErrorCode::NonPositiveParameter, std::string(name) + " must be positive");
  }
}

// Cross-check a pre-filled derived value against its recomputed form.
void check_derived(double provided, double computed, const char* name) {
  if (provided == 0.0) return;
  if (std::abs(provided - computed) > 1e-9 * std::abs(computed)) {
    fail(ErrorCode::InconsistentTiming,
         std::string(name) + " inconsistent with the values it derives from");
  }
}

}  // namespace

WaveformConfig validate_config(WaveformConfig raw) {
  require_positive(raw.carrier_frequency, "carrier_frequency");
  require_positive(raw.bandwidth, "bandwidth");
  require_positive(raw.cp_duration, "cp_duration");
  require_positive(raw.package_interval, "package_interval");
  if (raw.subcarriers < 1 || raw.symbols_per_frame < 1 || raw.packages < 1) {
    fail(ErrorCode::NonPositiveParameter, "subcarriers, symbols_per_frame and packages must be >= 1");
  }
  if (raw.noise.enabled && !std::isfinite(raw.noise.snr_db)) {
    fail(ErrorCode::NonPositiveParameter, "noise.snr_db must be finite when noise is enabled");
  }

  const double spacing = raw.bandwidth / raw.subcarriers;
  const double symbol = 1.0 / spacing;
  const double ofdm = symbol + raw.cp_duration;
  check_derived(raw.subcarrier_spacing, spacing, "subcarrier_spacing");
  check_derived(raw.symbol_duration, symbol, "symbol_duration");
  check_derived(raw.ofdm_duration, ofdm, "ofdm_duration");
  raw.subcarrier_spacing = spacing;
  raw.symbol_duration = symbol;
  raw.ofdm_duration = ofdm;

  // A package must fit its M symbols.
  if (raw.package_interval < raw.symbols_per_frame * raw.ofdm_duration * (1.0 - 1e-12)) {
    fail(ErrorCode::InconsistentTiming,
         "package_interval shorter than symbols_per_frame * ofdm_duration");
  }
  return raw;
}

ResolutionReport resolution_report(const WaveformConfig& cfg) {
  ResolutionReport r{};
  r.range_resolution = kSpeedOfLight / (2.0 * cfg.subcarriers * cfg.subcarrier_spacing);
  r.velocity_resolution_frame =
      kSpeedOfLight / (2.0 * cfg.carrier_frequency * cfg.symbols_per_frame * cfg.ofdm_duration);
  r.velocity_resolution_packaged =
      kSpeedOfLight / (2.0 * cfg.carrier_frequency * cfg.packages * cfg.package_interval);
  r.max_velocity = kSpeedOfLight / (4.0 * cfg.carrier_frequency * cfg.package_interval);
  r.max_range = kSpeedOfLight * cfg.cp_duration / 2.0;
  r.max_doppler = 1.0 / (2.0 * cfg.package_interval);
  return r;
}

double column_time(const WaveformConfig& cfg, std::uint64_t column) {
  const std::uint64_t m = column % cfg.symbols_per_frame;
  const std::uint64_t l = column / cfg.symbols_per_frame;
  return static_cast<double>(m) * cfg.ofdm_duration +
         static_cast<double>(l) * cfg.package_interval;
}

double slow_time_spacing(const WaveformConfig& cfg) {
  return cfg.packages > 1 ? cfg.package_interval : cfg.ofdm_duration;
}

}  // namespace omds
