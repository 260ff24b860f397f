#pragma once

#include <vector>

#include "omds/frame.hpp"
#include "omds/params.hpp"
#include "omds/scene.hpp"

namespace omds {

/// Doppler shift of a radial velocity (positive toward the transceiver,
/// range decreasing): f_D = 2 v f_c / c0.
double doppler_shift(double radial_velocity, double carrier_frequency);

/// Round-trip delay tau = 2 r / c0. Throws NonPositiveRange.
double round_trip_delay(double range);

/// Synthesizes the received frame from the transmitted frame and one
/// scatter snapshot per slow-time column (time t_c = m T_O + l T_F):
///
///   Rx[n,c] = sum_p a_p(t_c) Tx[n,c] exp(-j 2 pi tau_p(t_c) (f_c + n_b df)) + Z[n,c]
///
/// with tau_p = 2 r_p / c0 and n_b = n - N/2 the baseband subcarrier index,
/// so slow-time phase evolution is referenced to the carrier at band
/// center. The quasi-static per-column delay carries all motion; for a
/// constant-velocity point this reduces to a delay ramp over subcarriers
/// times exp(+j 2 pi f_D t_c).
///
/// Noise, when enabled, is circularly-symmetric complex Gaussian with
/// variance set by snr_db against the mean power of the noiseless sum,
/// generated from per-column substreams: output is bit-identical for any
/// thread count.
FrameMatrix synthesize_rx(const FrameMatrix& ftx,
                          const std::vector<ScatterSnapshot>& snapshots,
                          const WaveformConfig& cfg, const NoiseConfig& noise,
                          unsigned threads = 1);

}  // namespace omds
