#include "omds/channel.hpp"

#include <cmath>

#include "omds/constants.hpp"
#include "omds/rng.hpp"
#include "parallel.hpp"

namespace omds {

namespace {
constexpr std::uint64_t kNoiseRole = 1;
}

double doppler_shift(double radial_velocity, double carrier_frequency) {
  return 2.0 * radial_velocity * carrier_frequency / kSpeedOfLight;
}

double round_trip_delay(double range) {
  if (range <= 0.0) {
    fail(ErrorCode::NonPositiveRange, "round-trip delay needs a positive range");
  }
  return 2.0 * range / kSpeedOfLight;
}

FrameMatrix synthesize_rx(const FrameMatrix& ftx,
                          const std::vector<ScatterSnapshot>& snapshots,
                          const WaveformConfig& cfg, const NoiseConfig& noise,
                          unsigned threads) {
  const std::uint32_t n_rows = cfg.subcarriers;
  const std::uint64_t n_cols = cfg.columns();
  if (ftx.rows() != n_rows || ftx.cols() != n_cols) {
    fail(ErrorCode::DimensionMismatch, "transmit frame does not match the config grid");
  }
  if (snapshots.size() != n_cols) {
    fail(ErrorCode::DimensionMismatch, "need exactly one snapshot per slow-time column");
  }
  const std::size_t n_points = snapshots.empty() ? 0 : snapshots[0].points.size();
  for (std::uint64_t c = 0; c < n_cols; ++c) {
    if (snapshots[c].points.size() != n_points) {
      fail(ErrorCode::DimensionMismatch, "snapshots differ in point count");
    }
    if (std::abs(snapshots[c].time - column_time(cfg, c)) > 1e-12) {
      fail(ErrorCode::SnapshotTimeMismatch, "snapshot time off the slow-time grid");
    }
  }

  FrameMatrix rx(n_rows, n_cols);
  const double df = cfg.subcarrier_spacing;
  const double fc = cfg.carrier_frequency;
  const double base_offset = -0.5 * static_cast<double>(n_rows);  // n_b = n - N/2

  detail::parallel_chunks(n_cols, threads, [&](std::uint64_t begin, std::uint64_t end) {
    std::vector<cplx> column(n_rows);
    for (std::uint64_t c = begin; c < end; ++c) {
      std::fill(column.begin(), column.end(), cplx{0.0, 0.0});
      for (const ScatterPoint& pt : snapshots[c].points) {
        const double tau = round_trip_delay(pt.range);
        // phase(n) = -2 pi tau (f_c + (n - N/2) df), advanced by rotation
        const double phase0 = -2.0 * kPi * tau * (fc + base_offset * df);
        const double step = -2.0 * kPi * tau * df;
        cplx term = pt.reflectivity * std::polar(1.0, phase0);
        const cplx rot = std::polar(1.0, step);
        for (std::uint32_t n = 0; n < n_rows; ++n) {
          column[n] += term;
          term *= rot;
        }
      }
      for (std::uint32_t n = 0; n < n_rows; ++n) {
        rx.at(n, c) = column[n] * ftx.at(n, c);
      }
    }
  });

  if (noise.enabled) {
    // Mean noiseless power with a fixed reduction order (per column, then
    // across columns) so the value does not depend on the thread count.
    std::vector<double> column_power(n_cols, 0.0);
    detail::parallel_chunks(n_cols, threads, [&](std::uint64_t begin, std::uint64_t end) {
      for (std::uint64_t c = begin; c < end; ++c) {
        double acc = 0.0;
        for (std::uint32_t n = 0; n < n_rows; ++n) acc += std::norm(rx.at(n, c));
        column_power[c] = acc;
      }
    });
    double total = 0.0;
    for (double p : column_power) total += p;
    const double mean_power = total / (static_cast<double>(n_rows) * n_cols);
    const double sigma =
        std::sqrt(mean_power * std::pow(10.0, -noise.snr_db / 10.0) / 2.0);

    detail::parallel_chunks(n_cols, threads, [&](std::uint64_t begin, std::uint64_t end) {
      for (std::uint64_t c = begin; c < end; ++c) {
        SplitMix64 rng(substream_seed(noise.seed, c, kNoiseRole));
        for (std::uint32_t n = 0; n < n_rows; ++n) {
          const auto [g1, g2] = rng.gaussian_pair();
          rx.at(n, c) += cplx{sigma * g1, sigma * g2};
        }
      }
    });
  }
  return rx;
}

}  // namespace omds
