#include "omds/microdoppler.hpp"

#include <algorithm>
#include <cmath>

#include "omds/constants.hpp"
#include "omds/errors.hpp"
#include "fft.hpp"

namespace omds {

namespace {

std::vector<double> make_window(const StftConfig& cfg) {
  const std::uint32_t q_len = cfg.window_length;
  std::vector<double> w(q_len, 1.0);
  switch (cfg.window) {
    case StftWindow::Rectangular:
      break;
    case StftWindow::Hann:
      for (std::uint32_t q = 0; q < q_len; ++q) {
        w[q] = 0.5 * (1.0 - std::cos(2.0 * kPi * q / (q_len - 1)));
      }
      break;
    case StftWindow::Gaussian: {
      const double std_dev = cfg.gaussian_std > 0.0 ? cfg.gaussian_std : q_len / 6.0;
      const double mid = (q_len - 1) / 2.0;
      for (std::uint32_t q = 0; q < q_len; ++q) {
        const double z = (q - mid) / std_dev;
        w[q] = std::exp(-0.5 * z * z);
      }
      break;
    }
  }
  return w;
}

// Ensures a dB view of the spectrogram without changing the caller's copy.
Spectrogram as_db(const Spectrogram& spec, double floor_db) {
  return spec.db_scaled ? spec : to_db(spec, floor_db);
}

// Depth of the per-frame envelope used for the maximum-Doppler trace.
constexpr double kTraceDepthDb = 20.0;
// Autocorrelation acceptance: periodicity threshold and the fraction of the
// best local maximum a smaller lag must reach to win (subharmonic guard).
constexpr double kMinPeriodicity = 0.3;
constexpr double kLagAcceptFraction = 0.8;

}  // namespace

std::vector<cplx> slow_time_series(const FrameMatrix& f, SlowTimeMode mode,
                                   std::uint32_t* selected_bin) {
  if (f.size() == 0) {
    fail(ErrorCode::DimensionMismatch, "empty frame matrix");
  }
  const std::uint32_t n_rows = f.rows();
  const std::uint64_t n_cols = f.cols();

  if (mode == SlowTimeMode::SumSubcarriers) {
    if (selected_bin) *selected_bin = 0;
    std::vector<cplx> series(n_cols, cplx{0.0, 0.0});
    for (std::uint32_t n = 0; n < n_rows; ++n) {
      for (std::uint64_t c = 0; c < n_cols; ++c) series[c] += f.at(n, c);
    }
    return series;
  }

  // Range transform per column, energy per range bin across slow time.
  detail::Dft1d ifft(n_rows, +1);
  std::vector<cplx> col(n_rows), out;
  std::vector<cplx> range_rows(static_cast<std::size_t>(n_rows) * n_cols);
  std::vector<double> energy(n_rows, 0.0);
  for (std::uint64_t c = 0; c < n_cols; ++c) {
    for (std::uint32_t n = 0; n < n_rows; ++n) col[n] = f.at(n, c);
    ifft.run(col, out);
    for (std::uint32_t n = 0; n < n_rows; ++n) {
      range_rows[static_cast<std::size_t>(n) * n_cols + c] = out[n];
      energy[n] += std::norm(out[n]);
    }
  }
  std::uint32_t best = 0;
  for (std::uint32_t n = 1; n < n_rows; ++n) {
    if (energy[n] > energy[best]) best = n;
  }
  if (selected_bin) *selected_bin = best;
  return {range_rows.begin() + static_cast<std::size_t>(best) * n_cols,
          range_rows.begin() + static_cast<std::size_t>(best + 1) * n_cols};
}

Spectrogram stft_spectrogram(std::span<const cplx> series, const StftConfig& cfg,
                             double sample_interval) {
  if (cfg.fft_length == 0 || cfg.window_length == 0 || cfg.hop == 0 ||
      cfg.window_length > cfg.fft_length || cfg.hop > cfg.window_length) {
    fail(ErrorCode::NonPositiveParameter, "invalid STFT configuration");
  }
  if (series.size() < cfg.window_length) {
    fail(ErrorCode::SeriesTooShort, "series shorter than the STFT window");
  }
  const std::uint32_t n_d = cfg.fft_length;
  const std::uint32_t q_len = cfg.window_length;
  const std::uint32_t frames =
      static_cast<std::uint32_t>((series.size() - q_len) / cfg.hop) + 1;
  const std::vector<double> window = make_window(cfg);

  Spectrogram spec;
  spec.doppler_bins = n_d;
  spec.frames = frames;
  spec.time_step = cfg.hop * sample_interval;
  spec.doppler_step = 1.0 / (sample_interval * n_d);
  spec.power.assign(static_cast<std::size_t>(n_d) * frames, 0.0);

  detail::Dft1d fft(n_d, -1);
  std::vector<cplx> seg(q_len), out;
  const double norm = 1.0 / n_d;
  for (std::uint32_t m = 0; m < frames; ++m) {
    const std::size_t start = static_cast<std::size_t>(m) * cfg.hop;
    for (std::uint32_t q = 0; q < q_len; ++q) {
      seg[q] = series[start + q] * window[q];
    }
    fft.run(seg, out);
    // fftshift rows: DFT bin i lands on row (i + N_D/2) mod N_D
    for (std::uint32_t i = 0; i < n_d; ++i) {
      const std::uint32_t row = (i + n_d / 2) % n_d;
      spec.at(row, m) = std::norm(out[i]) * norm;
    }
  }
  return spec;
}

Spectrogram to_db(const Spectrogram& spec, double floor_db) {
  if (spec.power.empty()) {
    fail(ErrorCode::EmptySpectrogram, "cannot scale an empty spectrogram");
  }
  const double peak = *std::max_element(spec.power.begin(), spec.power.end());
  Spectrogram out = spec;
  out.db_scaled = true;
  out.floor_db = floor_db;
  for (double& p : out.power) {
    p = peak > 0.0 && p > 0.0
            ? std::max(10.0 * std::log10(p / peak), floor_db)
            : floor_db;
  }
  return out;
}

double estimate_rotation_rate(const Spectrogram& spec, int n_blades) {
  if (n_blades <= 0) {
    fail(ErrorCode::NonPositiveInput, "n_blades must be positive");
  }
  const Spectrogram db = as_db(spec, -120.0);
  const std::uint32_t frames = db.frames;
  if (frames < 8) {
    fail(ErrorCode::NoPeriodicity, "too few STFT frames for a period estimate");
  }

  // Per-frame maximum |Doppler| above the frame envelope.
  std::vector<double> trace(frames, 0.0);
  for (std::uint32_t m = 0; m < frames; ++m) {
    double frame_max = db.floor_db;
    for (std::uint32_t i = 0; i < db.doppler_bins; ++i) {
      frame_max = std::max(frame_max, db.at(i, m));
    }
    double extent = 0.0;
    for (std::uint32_t i = 0; i < db.doppler_bins; ++i) {
      if (db.at(i, m) >= frame_max - kTraceDepthDb) {
        extent = std::max(extent, std::abs(db.bin_frequency(i)));
      }
    }
    trace[m] = extent;
  }

  double mean = 0.0;
  for (double v : trace) mean += v;
  mean /= frames;

  std::vector<double> ac(frames, 0.0);
  for (std::uint32_t lag = 0; lag < frames; ++lag) {
    double acc = 0.0;
    for (std::uint32_t m = 0; m + lag < frames; ++m) {
      acc += (trace[m] - mean) * (trace[m + lag] - mean);
    }
    ac[lag] = acc;
  }
  if (ac[0] <= 0.0) {
    fail(ErrorCode::NoPeriodicity, "flat maximum-Doppler trace");
  }
  const double zero_lag = ac[0];
  for (std::uint32_t lag = 0; lag < frames; ++lag) ac[lag] /= zero_lag;

  // Local maxima, then the smallest lag within kLagAcceptFraction of the
  // strongest; bare argmax tends to lock onto period multiples.
  const std::uint32_t half = frames / 2;
  std::vector<std::uint32_t> peaks;
  for (std::uint32_t lag = 1; lag + 1 < half; ++lag) {
    if (ac[lag] >= ac[lag - 1] && ac[lag] >= ac[lag + 1]) peaks.push_back(lag);
  }
  if (peaks.empty()) {
    fail(ErrorCode::NoPeriodicity, "no repetition found in the Doppler trace");
  }
  double best = 0.0;
  for (std::uint32_t lag : peaks) best = std::max(best, ac[lag]);
  if (best < kMinPeriodicity) {
    fail(ErrorCode::NoPeriodicity, "Doppler trace repetition below threshold");
  }
  std::uint32_t lag = 0;
  for (std::uint32_t cand : peaks) {
    if (ac[cand] >= kLagAcceptFraction * best) {
      lag = cand;
      break;
    }
  }

  double refined = lag;
  if (lag >= 1 && lag + 1 < frames) {
    const double y0 = ac[lag - 1], y1 = ac[lag], y2 = ac[lag + 1];
    const double denom = y0 - 2.0 * y1 + y2;
    if (denom < 0.0) {
      refined += std::clamp(0.5 * (y0 - y2) / denom, -0.5, 0.5);
    }
  }
  const double flash_period = refined * db.time_step;
  return 1.0 / (n_blades * flash_period);
}

double max_doppler(const Spectrogram& spec, double threshold_db) {
  const Spectrogram db = as_db(spec, -200.0);
  double extent = 0.0;
  for (std::uint32_t i = 0; i < db.doppler_bins; ++i) {
    for (std::uint32_t m = 0; m < db.frames; ++m) {
      if (db.at(i, m) >= -threshold_db) {
        extent = std::max(extent, std::abs(db.bin_frequency(i)));
        break;
      }
    }
  }
  return extent;
}

double estimate_blade_length(double max_doppler_hz, double rotation_rate,
                             double carrier_frequency) {
  if (rotation_rate <= 0.0 || carrier_frequency <= 0.0 || max_doppler_hz < 0.0) {
    fail(ErrorCode::NonPositiveInput, "blade length needs positive rate and carrier");
  }
  const double tip_speed = max_doppler_hz * kSpeedOfLight / (2.0 * carrier_frequency);
  return tip_speed / (2.0 * kPi * rotation_rate);
}

}  // namespace omds
