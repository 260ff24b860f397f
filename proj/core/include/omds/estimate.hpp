#pragma once

#include <cstdint>
#include <vector>

#include "omds/frame.hpp"
#include "omds/params.hpp"

namespace omds {

/// Range-velocity power map: K range bins x H velocity bins, row-major.
/// Velocity bins are in DFT order; bins above H/2 represent negative
/// (receding) velocities. signed_velocity_bin converts.
struct RangeDopplerMap {
  std::vector<double> power;
  std::uint32_t range_bins = 0;     // K
  std::uint32_t velocity_bins = 0;  // H
  double range_scale = 0.0;         // m per range bin: c0 / (2 df K)
  double velocity_scale = 0.0;      // m/s per velocity bin: c0 / (2 f_c T_slow H)

  double at(std::uint32_t n, std::uint32_t m) const {
    return power[static_cast<std::size_t>(n) * velocity_bins + m];
  }
  double& at(std::uint32_t n, std::uint32_t m) {
    return power[static_cast<std::size_t>(n) * velocity_bins + m];
  }
  /// Two-sided mapping: bins above H/2 fold to negative velocities.
  std::int64_t signed_velocity_bin(std::uint32_t m) const {
    return m <= velocity_bins / 2
               ? static_cast<std::int64_t>(m)
               : static_cast<std::int64_t>(m) - velocity_bins;
  }
};

struct TargetEstimate {
  double range = 0.0;        // m
  double velocity = 0.0;     // m/s, positive toward the transceiver
  double peak_power = 0.0;
  std::uint32_t peak_range_bin = 0;
  std::uint32_t peak_velocity_bin = 0;
};

/// Element-wise division Rx ./ Tx, removing the modulated data. Throws
/// DimensionMismatch and ZeroTxSymbol.
FrameMatrix channel_matrix(const FrameMatrix& frx, const FrameMatrix& ftx);

/// 2-D periodogram: forward DFT of length H over slow time, then
/// unnormalized inverse DFT of length K over subcarriers,
///   P[n,m] = |sum_k (sum_h F[k,h] e^{-j2pi hm/H}) e^{+j2pi kn/K}|^2 / (N C),
/// with C the slow-time column count. K >= N and H >= C (zero-padding
/// refines the grid); otherwise BadPadLength.
RangeDopplerMap periodogram(const FrameMatrix& f, std::uint32_t range_fft,
                            std::uint32_t doppler_fft, const WaveformConfig& cfg);

/// Global power argmax; ties break toward the smallest range bin, then the
/// smallest velocity bin. Bins convert to physical units via the map
/// scales.
TargetEstimate estimate_target(const RangeDopplerMap& map);

}  // namespace omds
