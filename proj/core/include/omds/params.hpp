#pragma once

#include <cstdint>

#include "omds/errors.hpp"

namespace omds {

enum class Alphabet { Qpsk, Bpsk, Qam16 };

struct NoiseConfig {
  bool enabled = false;
  double snr_db = 0.0;  // against mean received-signal power
  std::uint64_t seed = 0;
};

/// All OFDM and system timing in one place.
///
/// User-provided: carrier_frequency f_c, bandwidth B, subcarriers N,
/// symbols_per_frame M, packages L, cp_duration T_G, package_interval T_F,
/// alphabet, noise, seed. Derived (filled by validate_config):
/// subcarrier_spacing Δf = B/N, symbol_duration T = 1/Δf, ofdm_duration
/// T_O = T + T_G. A config with derived fields already set is cross-checked
/// instead (1e-9 relative).
struct WaveformConfig {
  double carrier_frequency = 0.0;  // f_c [Hz]
  double bandwidth = 0.0;          // B [Hz]
  std::uint32_t subcarriers = 0;   // N
  std::uint32_t symbols_per_frame = 1;  // M
  std::uint32_t packages = 1;      // L
  double cp_duration = 0.0;        // T_G [s]
  double package_interval = 0.0;   // T_F [s]
  Alphabet alphabet = Alphabet::Qpsk;
  NoiseConfig noise;
  std::uint64_t seed = 1;

  // derived
  double subcarrier_spacing = 0.0;  // Δf [Hz]
  double symbol_duration = 0.0;     // T [s]
  double ofdm_duration = 0.0;       // T_O [s]

  std::uint64_t columns() const {
    return static_cast<std::uint64_t>(symbols_per_frame) * packages;
  }
};

struct ResolutionReport {
  double range_resolution;               // Δr = c0 / (2 N Δf)
  double velocity_resolution_frame;      // c0 / (2 f_c M T_O)
  double velocity_resolution_packaged;   // c0 / (2 f_c L T_F)
  double max_velocity;                   // c0 / (4 f_c T_F)
  double max_range;                      // c0 T_G / 2 (delay must fit the CP)
  double max_doppler;                    // 1 / (2 T_F)
};

/// Fills derived fields and enforces the timing invariants. Throws
/// NonPositiveParameter or InconsistentTiming (T_F < M * T_O).
WaveformConfig validate_config(WaveformConfig raw);

/// Pure function of a validated config; identical inputs give bit-identical
/// reports.
ResolutionReport resolution_report(const WaveformConfig& cfg);

/// Slow-time instant of column c = m + l*M: t = m*T_O + l*T_F.
double column_time(const WaveformConfig& cfg, std::uint64_t column);

/// Slow-time sample spacing used for velocity/Doppler axes: T_F across
/// packages when L > 1, otherwise T_O within the single frame.
double slow_time_spacing(const WaveformConfig& cfg);

}  // namespace omds
