#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "omds/channel.hpp"
#include "omds/constants.hpp"
#include "omds/estimate.hpp"
#include "omds/rng.hpp"
#include "omds/txgen.hpp"

using namespace omds;

namespace {

WaveformConfig desk(std::uint32_t n, std::uint32_t l) {
  WaveformConfig w;
  w.carrier_frequency = 28e9;
  w.bandwidth = 1.5e9;
  w.subcarriers = n;
  w.symbols_per_frame = 1;
  w.packages = l;
  w.cp_duration = 4.2666666666666666e-8;
  w.package_interval = 5e-4;
  return validate_config(w);
}

// Double-loop DFT evaluation of the periodogram definition.
RangeDopplerMap brute_force(const FrameMatrix& f, std::uint32_t big_k, std::uint32_t big_h,
                            const WaveformConfig& cfg) {
  RangeDopplerMap map;
  map.range_bins = big_k;
  map.velocity_bins = big_h;
  map.range_scale = kSpeedOfLight / (2.0 * cfg.subcarrier_spacing * big_k);
  map.velocity_scale =
      kSpeedOfLight / (2.0 * cfg.carrier_frequency * slow_time_spacing(cfg) * big_h);
  map.power.assign(static_cast<std::size_t>(big_k) * big_h, 0.0);
  const double norm = 1.0 / (static_cast<double>(f.rows()) * f.cols());
  for (std::uint32_t n = 0; n < big_k; ++n) {
    for (std::uint32_t m = 0; m < big_h; ++m) {
      cplx acc{0.0, 0.0};
      for (std::uint32_t k = 0; k < f.rows(); ++k) {
        cplx inner{0.0, 0.0};
        for (std::uint64_t h = 0; h < f.cols(); ++h) {
          inner += f.at(k, h) *
                   std::polar(1.0, -2.0 * kPi * static_cast<double>(h) * m / big_h);
        }
        acc += inner * std::polar(1.0, 2.0 * kPi * static_cast<double>(k) * n / big_k);
      }
      map.at(n, m) = std::norm(acc) * norm;
    }
  }
  return map;
}

FrameMatrix random_matrix(std::uint32_t rows, std::uint64_t cols, std::uint64_t seed) {
  FrameMatrix f(rows, cols);
  SplitMix64 rng(seed);
  for (auto& v : f.data()) {
    v = cplx{rng.uniform01() * 2.0 - 1.0, rng.uniform01() * 2.0 - 1.0};
  }
  return f;
}

}  // namespace

TEST_CASE("channel matrix removes the modulated data") {
  const WaveformConfig cfg = desk(16, 4);
  const FrameMatrix tx = generate_tx_frame(cfg, SymbolAlphabet::qam16(), 5);

  SUBCASE("identity") {
    const FrameMatrix f = channel_matrix(tx, tx);
    for (const cplx& v : f.data()) CHECK(std::abs(v - cplx{1.0, 0.0}) < 1e-14);
  }

  SUBCASE("scalar channel") {
    FrameMatrix rx = tx;
    for (auto& v : rx.data()) v *= 2.0;
    const FrameMatrix f = channel_matrix(rx, tx);
    for (const cplx& v : f.data()) CHECK(std::abs(v - cplx{2.0, 0.0}) < 1e-14);
  }

  SUBCASE("static point: entries independent of the symbols") {
    std::vector<ScatterSnapshot> snaps(cfg.columns());
    for (std::uint64_t c = 0; c < cfg.columns(); ++c) {
      snaps[c].time = column_time(cfg, c);
      snaps[c].points = {{5.0, 1.0, 0.0}};
    }
    const FrameMatrix rx = synthesize_rx(tx, snaps, cfg, {});
    const FrameMatrix f = channel_matrix(rx, tx);
    const double tau = round_trip_delay(5.0);
    for (std::uint32_t n = 0; n < cfg.subcarriers; ++n) {
      const double nb = static_cast<double>(n) - cfg.subcarriers / 2.0;
      const cplx want = std::polar(
          1.0, -2.0 * kPi * tau * (cfg.carrier_frequency + nb * cfg.subcarrier_spacing));
      for (std::uint64_t c = 0; c < cfg.columns(); ++c) {
        CHECK(std::abs(f.at(n, c) - want) < 1e-12);
      }
    }
  }

  SUBCASE("zero symbol rejected") {
    FrameMatrix bad = tx;
    bad.at(3, 1) = cplx{0.0, 0.0};
    try {
      channel_matrix(tx, bad);
      CHECK(false);
    } catch (const SimError& e) {
      CHECK(e.code() == ErrorCode::ZeroTxSymbol);
    }
  }

  SUBCASE("shape mismatch rejected") {
    FrameMatrix other(cfg.subcarriers, cfg.columns() + 1);
    CHECK_THROWS_AS(channel_matrix(other, tx), SimError);
  }
}

TEST_CASE("periodogram of a DC matrix concentrates at the origin") {
  const WaveformConfig cfg = desk(8, 8);
  FrameMatrix f(8, 8);
  for (auto& v : f.data()) v = cplx{1.0, 0.0};
  const RangeDopplerMap map = periodogram(f, 8, 8, cfg);
  for (std::uint32_t n = 0; n < 8; ++n) {
    for (std::uint32_t m = 0; m < 8; ++m) {
      if (n == 0 && m == 0) {
        CHECK(map.at(n, m) == doctest::Approx(64.0).epsilon(1e-12));
      } else {
        CHECK(map.at(n, m) < 1e-20);
      }
    }
  }
}

TEST_CASE("pure slow-time tone lands on its velocity bin") {
  const WaveformConfig cfg = desk(4, 16);
  FrameMatrix f(4, 16);
  for (std::uint32_t k = 0; k < 4; ++k) {
    for (std::uint64_t h = 0; h < 16; ++h) {
      f.at(k, h) = std::polar(1.0, 2.0 * kPi * 3.0 * static_cast<double>(h) / 16.0);
    }
  }
  const RangeDopplerMap map = periodogram(f, 4, 16, cfg);
  const TargetEstimate est = estimate_target(map);
  CHECK(est.peak_velocity_bin == 3);
  CHECK(est.peak_range_bin == 0);
}

TEST_CASE("brute-force equivalence and Parseval on random matrices") {
  SplitMix64 seeds(2024);
  for (int round = 0; round < 4; ++round) {
    const std::uint32_t rows = 2 + static_cast<std::uint32_t>(seeds.uniform_below(15));
    const std::uint32_t cols = 2 + static_cast<std::uint32_t>(seeds.uniform_below(15));
    const WaveformConfig cfg = desk(rows, cols);
    const FrameMatrix f = random_matrix(rows, cols, seeds.next());
    const std::uint32_t big_k = round % 2 == 0 ? rows : 2 * rows;
    const std::uint32_t big_h = round % 2 == 0 ? cols : 2 * cols + 1;

    const RangeDopplerMap fast = periodogram(f, big_k, big_h, cfg);
    const RangeDopplerMap slow = brute_force(f, big_k, big_h, cfg);
    double peak = 0.0;
    for (double p : slow.power) peak = std::max(peak, p);
    for (std::size_t i = 0; i < fast.power.size(); ++i) {
      CHECK(std::abs(fast.power[i] - slow.power[i]) <= 1e-9 * peak);
    }

    // Parseval at the unpadded sizes: sum P = (K H / (N C)) * sum |F|^2
    const RangeDopplerMap unpadded = periodogram(f, rows, cols, cfg);
    double map_sum = 0.0;
    for (double p : unpadded.power) map_sum += p;
    double frame_sum = 0.0;
    for (const cplx& v : f.data()) frame_sum += std::norm(v);
    CHECK(map_sum == doctest::Approx(frame_sum).epsilon(1e-9));
  }
}

TEST_CASE("pad lengths must cover the matrix") {
  const WaveformConfig cfg = desk(8, 8);
  const FrameMatrix f = random_matrix(8, 8, 3);
  try {
    periodogram(f, 4, 8, cfg);
    CHECK(false);
  } catch (const SimError& e) {
    CHECK(e.code() == ErrorCode::BadPadLength);
  }
  CHECK_THROWS_AS(periodogram(f, 8, 4, cfg), SimError);
}

TEST_CASE("peak extraction and tie-breaking") {
  RangeDopplerMap map;
  map.range_bins = 16;
  map.velocity_bins = 8;
  map.range_scale = 0.5;
  map.velocity_scale = 0.25;
  map.power.assign(16 * 8, 0.0);

  SUBCASE("single cell") {
    map.at(10, 4) = 3.0;
    const TargetEstimate est = estimate_target(map);
    CHECK(est.peak_range_bin == 10);
    CHECK(est.peak_velocity_bin == 4);
    CHECK(est.range == doctest::Approx(5.0));
    CHECK(est.velocity == doctest::Approx(1.0));  // bin 4 == H/2 keeps the positive edge
    CHECK(est.peak_power == doctest::Approx(3.0));
  }

  SUBCASE("negative velocity mapping") {
    map.at(2, 7) = 1.0;
    const TargetEstimate est = estimate_target(map);
    CHECK(est.velocity == doctest::Approx(-0.25));
  }

  SUBCASE("all-equal map breaks ties to the origin") {
    map.power.assign(16 * 8, 1.0);
    const TargetEstimate est = estimate_target(map);
    CHECK(est.peak_range_bin == 0);
    CHECK(est.peak_velocity_bin == 0);
  }
}

TEST_CASE("argmax is invariant under complex scaling of the frame") {
  const WaveformConfig cfg = desk(8, 8);
  const FrameMatrix f = random_matrix(8, 8, 8);
  const TargetEstimate base = estimate_target(periodogram(f, 16, 16, cfg));
  SplitMix64 rng(31);
  for (int i = 0; i < 5; ++i) {
    const cplx scale = std::polar(0.1 + 3.0 * rng.uniform01(), 2.0 * kPi * rng.uniform01());
    FrameMatrix g = f;
    for (auto& v : g.data()) v *= scale;
    const TargetEstimate scaled = estimate_target(periodogram(g, 16, 16, cfg));
    CHECK(scaled.peak_range_bin == base.peak_range_bin);
    CHECK(scaled.peak_velocity_bin == base.peak_velocity_bin);
  }
}

TEST_CASE("zero padding refines but does not move the point peak") {
  const WaveformConfig cfg = desk(64, 16);
  FrameMatrix tx(cfg.subcarriers, cfg.columns());
  for (auto& v : tx.data()) v = cplx{1.0, 0.0};
  std::vector<ScatterSnapshot> snaps(cfg.columns());
  for (std::uint64_t c = 0; c < cfg.columns(); ++c) {
    snaps[c].time = column_time(cfg, c);
    snaps[c].points = {{5.0, 1.0, 0.0}};
  }
  const FrameMatrix f = channel_matrix(synthesize_rx(tx, snaps, cfg, {}), tx);

  const double dr = kSpeedOfLight / (2.0 * cfg.subcarriers * cfg.subcarrier_spacing);
  const TargetEstimate e1 = estimate_target(periodogram(f, 256, 16, cfg));
  const TargetEstimate e2 = estimate_target(periodogram(f, 512, 16, cfg));
  CHECK(std::abs(e1.range - 5.0) <= dr / 2.0);
  CHECK(std::abs(e2.range - e1.range) <= dr / 2.0);
}
