#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "omds/frame.hpp"

namespace omds {

enum class StftWindow { Gaussian, Rectangular, Hann };

struct StftConfig {
  std::uint32_t fft_length = 0;     // N_D
  std::uint32_t window_length = 0;  // Q, <= N_D
  std::uint32_t hop = 0;            // slow-time samples per frame step
  StftWindow window = StftWindow::Gaussian;
  double gaussian_std = 0.0;        // in samples; 0 selects Q/6
};

/// Time-frequency power map. Rows are Doppler bins in centered order
/// (row 0 = -fs/2, row N_D/2 = 0 Hz), columns are STFT frames.
struct Spectrogram {
  std::vector<double> power;
  std::uint32_t doppler_bins = 0;  // N_D
  std::uint32_t frames = 0;
  double time_step = 0.0;     // s per frame (hop * sample interval)
  double doppler_step = 0.0;  // Hz per bin (fs / N_D)
  bool db_scaled = false;
  double floor_db = 0.0;

  double at(std::uint32_t i, std::uint32_t m) const {
    return power[static_cast<std::size_t>(i) * frames + m];
  }
  double& at(std::uint32_t i, std::uint32_t m) {
    return power[static_cast<std::size_t>(i) * frames + m];
  }
  /// Center frequency of row i.
  double bin_frequency(std::uint32_t i) const {
    return (static_cast<double>(i) - doppler_bins / 2) * doppler_step;
  }
};

enum class SlowTimeMode { SumSubcarriers, PeakRangeBin };

/// Collapses the channel matrix to one complex sample per slow-time column.
/// SumSubcarriers: column sums. PeakRangeBin: the row of the range
/// transform (inverse DFT over subcarriers) whose power summed across slow
/// time is maximal; ties break toward the smallest bin. Returns the series
/// and, for PeakRangeBin, reports the selected bin through *selected_bin.
std::vector<cplx> slow_time_series(const FrameMatrix& f, SlowTimeMode mode,
                                   std::uint32_t* selected_bin = nullptr);

/// Windowed STFT power: frames with full windows only,
///   D[i,m] = |sum_q series[q + m*hop] w(q) e^{-j2pi i q / N_D}|^2 / N_D,
/// rows fftshifted to centered order. sample_interval is the slow-time
/// spacing (usually T_F), fixing time_step and doppler_step.
Spectrogram stft_spectrogram(std::span<const cplx> series, const StftConfig& cfg,
                             double sample_interval);

/// 10 log10(p / p_max), clamped below at floor_db.
Spectrogram to_db(const Spectrogram& spec, double floor_db);

/// Rotation rate from the blade-flash repetition period: autocorrelation of
/// the per-frame maximum-Doppler trace, smallest strong lag (>= 0.8 of the
/// best local maximum) to avoid period doubling, parabolic lag refinement.
/// Each full rotation produces n_blades flashes. Throws NoPeriodicity when
/// the peak falls below 0.3 of the zero lag or the trace is flat.
double estimate_rotation_rate(const Spectrogram& spec, int n_blades);

/// Largest |Doppler| whose power reaches (global max - threshold_db) in any
/// frame; 0 when only the peak itself qualifies at 0 Hz.
double max_doppler(const Spectrogram& spec, double threshold_db);

/// Blade length from the Doppler extent: tip speed V_t = f_Dmax c0 / (2 f_c),
/// R = V_t / (2 pi rotation_rate).
double estimate_blade_length(double max_doppler_hz, double rotation_rate,
                             double carrier_frequency);

}  // namespace omds
