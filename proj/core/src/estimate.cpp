#include "omds/estimate.hpp"

#include <cmath>

#include "omds/constants.hpp"
#include "fft.hpp"

namespace omds {

FrameMatrix channel_matrix(const FrameMatrix& frx, const FrameMatrix& ftx) {
  if (!frx.same_shape(ftx)) {
    fail(ErrorCode::DimensionMismatch, "receive and transmit frames differ in shape");
  }
  FrameMatrix f(frx.rows(), frx.cols());
  const std::size_t total = frx.size();
  for (std::size_t i = 0; i < total; ++i) {
    const cplx tx = ftx.data()[i];
    if (tx.real() == 0.0 && tx.imag() == 0.0) {
      fail(ErrorCode::ZeroTxSymbol, "transmit frame contains a zero symbol");
    }
    f.data()[i] = frx.data()[i] / tx;
  }
  return f;
}

RangeDopplerMap periodogram(const FrameMatrix& f, std::uint32_t range_fft,
                            std::uint32_t doppler_fft, const WaveformConfig& cfg) {
  const std::uint32_t n_sub = f.rows();
  const std::uint64_t n_cols = f.cols();
  if (range_fft < n_sub || doppler_fft < n_cols) {
    fail(ErrorCode::BadPadLength, "transform lengths must cover the matrix");
  }

  // Stage 1: forward DFT over slow time, one pass per subcarrier row.
  std::vector<cplx> stage(static_cast<std::size_t>(n_sub) * doppler_fft);
  {
    detail::Dft1d fft(doppler_fft, -1);
    std::vector<cplx> row(n_cols), out;
    for (std::uint32_t k = 0; k < n_sub; ++k) {
      for (std::uint64_t c = 0; c < n_cols; ++c) row[c] = f.at(k, c);
      fft.run(row, out);
      std::copy(out.begin(), out.end(),
                stage.begin() + static_cast<std::size_t>(k) * doppler_fft);
    }
  }

  RangeDopplerMap map;
  map.range_bins = range_fft;
  map.velocity_bins = doppler_fft;
  map.range_scale =
      kSpeedOfLight / (2.0 * cfg.subcarrier_spacing * range_fft);
  map.velocity_scale = kSpeedOfLight / (2.0 * cfg.carrier_frequency *
                                        slow_time_spacing(cfg) * doppler_fft);
  map.power.assign(static_cast<std::size_t>(range_fft) * doppler_fft, 0.0);

  // Stage 2: unnormalized inverse DFT over subcarriers per velocity column.
  const double norm = 1.0 / (static_cast<double>(n_sub) * n_cols);
  detail::Dft1d ifft(range_fft, +1);
  std::vector<cplx> col(n_sub), out;
  for (std::uint32_t m = 0; m < doppler_fft; ++m) {
    for (std::uint32_t k = 0; k < n_sub; ++k) {
      col[k] = stage[static_cast<std::size_t>(k) * doppler_fft + m];
    }
    ifft.run(col, out);
    for (std::uint32_t n = 0; n < range_fft; ++n) {
      map.at(n, m) = std::norm(out[n]) * norm;
    }
  }
  return map;
}

TargetEstimate estimate_target(const RangeDopplerMap& map) {
  if (map.power.empty()) {
    fail(ErrorCode::DimensionMismatch, "empty range-Doppler map");
  }
  // Row-major scan with strict > keeps the first (smallest range bin, then
  // smallest velocity bin) among ties.
  std::size_t best = 0;
  double best_power = map.power[0];
  for (std::size_t i = 1; i < map.power.size(); ++i) {
    if (map.power[i] > best_power) {
      best_power = map.power[i];
      best = i;
    }
  }
  TargetEstimate est;
  est.peak_range_bin = static_cast<std::uint32_t>(best / map.velocity_bins);
  est.peak_velocity_bin = static_cast<std::uint32_t>(best % map.velocity_bins);
  est.peak_power = best_power;
  est.range = est.peak_range_bin * map.range_scale;
  est.velocity = static_cast<double>(map.signed_velocity_bin(est.peak_velocity_bin)) *
                 map.velocity_scale;
  return est;
}

}  // namespace omds
