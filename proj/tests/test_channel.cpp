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

WaveformConfig desk(std::uint32_t n = 32, std::uint32_t m = 1, std::uint32_t l = 8) {
  WaveformConfig w;
  w.carrier_frequency = 28e9;
  w.bandwidth = 1.5e9;
  w.subcarriers = n;
  w.symbols_per_frame = m;
  w.packages = l;
  w.cp_duration = 1e-7;
  w.package_interval = 5e-4;
  return validate_config(w);
}

std::vector<ScatterSnapshot> grid_snapshots(const WaveformConfig& cfg,
                                            const std::vector<ScatterPoint>& pts) {
  std::vector<ScatterSnapshot> snaps(cfg.columns());
  for (std::uint64_t c = 0; c < cfg.columns(); ++c) {
    snaps[c].time = column_time(cfg, c);
    snaps[c].points = pts;
  }
  return snaps;
}

// Independent re-evaluation of the per-entry closed form, summing the
// scatter points in reverse order.
cplx oracle_entry(const WaveformConfig& cfg, const ScatterSnapshot& snap,
                  std::uint32_t n, const cplx& tx) {
  cplx acc{0.0, 0.0};
  const double nb = static_cast<double>(n) - cfg.subcarriers / 2.0;
  for (auto it = snap.points.rbegin(); it != snap.points.rend(); ++it) {
    const double tau = 2.0 * it->range / kSpeedOfLight;
    const double phase = -2.0 * kPi * tau * (cfg.carrier_frequency + nb * cfg.subcarrier_spacing);
    acc += it->reflectivity * std::polar(1.0, phase);
  }
  return acc * tx;
}

}  // namespace

TEST_CASE("doppler shift values and sign") {
  CHECK(doppler_shift(10.0, 28e9) == doctest::Approx(1866.6666667).epsilon(1e-9));
  CHECK(doppler_shift(0.0, 28e9) == 0.0);
  CHECK(doppler_shift(-5.357142857142857, 28e9) == doctest::Approx(-1000.0).epsilon(1e-12));
}

TEST_CASE("round trip delay") {
  CHECK(round_trip_delay(5.0) == doctest::Approx(2.0 * 5.0 / kSpeedOfLight).epsilon(1e-15));
  CHECK(round_trip_delay(kSpeedOfLight / 2.0) == doctest::Approx(1.0).epsilon(1e-15));
  // a target at c0 T_G / 2 fills the cyclic prefix exactly
  const double t_g = 0.17e-6;
  CHECK(round_trip_delay(kSpeedOfLight * t_g / 2.0) == doctest::Approx(t_g).epsilon(1e-12));
  CHECK_THROWS_AS(round_trip_delay(0.0), SimError);
}

TEST_CASE("static point: pure delay ramp over baseband subcarriers") {
  const WaveformConfig cfg = desk();
  FrameMatrix tx(cfg.subcarriers, cfg.columns());
  for (auto& v : tx.data()) v = cplx{1.0, 0.0};
  const auto snaps = grid_snapshots(cfg, {{5.0, 1.0, 0.0}});
  const FrameMatrix rx = synthesize_rx(tx, snaps, cfg, {});

  const double tau = 2.0 * 5.0 / kSpeedOfLight;
  for (std::uint32_t n = 0; n < cfg.subcarriers; ++n) {
    const double nb = static_cast<double>(n) - cfg.subcarriers / 2.0;
    const cplx want =
        std::polar(1.0, -2.0 * kPi * tau * (cfg.carrier_frequency + nb * cfg.subcarrier_spacing));
    for (std::uint64_t c = 0; c < cfg.columns(); ++c) {
      CHECK(std::abs(rx.at(n, c) - want) < 1e-12);
    }
  }
}

TEST_CASE("constant closing velocity reproduces the carrier Doppler rotation") {
  const WaveformConfig cfg = desk(16, 1, 32);
  FrameMatrix tx(cfg.subcarriers, cfg.columns());
  for (auto& v : tx.data()) v = cplx{1.0, 0.0};

  const double v = 10.0;  // toward the transceiver
  std::vector<ScatterSnapshot> snaps(cfg.columns());
  for (std::uint64_t c = 0; c < cfg.columns(); ++c) {
    snaps[c] = point_target_snapshot(5.0, -v, column_time(cfg, c));
    snaps[c].points[0].reflectivity = 1.0;  // drop the 1/r^2 scale for a pure tone
  }
  const FrameMatrix rx = synthesize_rx(tx, snaps, cfg, {});

  // at the band-center row the column-to-column rotation is exactly
  // 2 pi f_D T_F with f_D = 2 v f_c / c0
  const double f_d = doppler_shift(v, cfg.carrier_frequency);
  const std::uint32_t center = cfg.subcarriers / 2;
  // arg() wraps to (-pi, pi]; compare against the wrapped expected rotation
  const double want = std::remainder(2.0 * kPi * f_d * cfg.package_interval, 2.0 * kPi);
  for (std::uint64_t c = 0; c + 1 < cfg.columns(); ++c) {
    const double got = std::arg(rx.at(center, c + 1) * std::conj(rx.at(center, c)));
    CHECK(got == doctest::Approx(want).epsilon(1e-9));
  }
}

TEST_CASE("no scatter points yields a zero frame") {
  const WaveformConfig cfg = desk();
  FrameMatrix tx = generate_tx_frame(cfg, SymbolAlphabet::qpsk(), 2);
  const auto snaps = grid_snapshots(cfg, {});
  const FrameMatrix rx = synthesize_rx(tx, snaps, cfg, {});
  for (const cplx& v : rx.data()) CHECK(std::abs(v) == 0.0);
}

TEST_CASE("phase fidelity against the closed-form oracle") {
  const WaveformConfig cfg = desk(24, 2, 6);
  const FrameMatrix tx = generate_tx_frame(cfg, SymbolAlphabet::qam16(), 9);

  SplitMix64 rng(123);
  std::vector<ScatterSnapshot> snaps(cfg.columns());
  for (std::uint64_t c = 0; c < cfg.columns(); ++c) {
    snaps[c].time = column_time(cfg, c);
    for (int p = 0; p < 7; ++p) {
      snaps[c].points.push_back(
          {1.0 + 10.0 * rng.uniform01(), 0.1 + rng.uniform01(), 0.0});
    }
  }
  const FrameMatrix rx = synthesize_rx(tx, snaps, cfg, {});

  double max_rel = 0.0;
  for (std::uint32_t n = 0; n < cfg.subcarriers; ++n) {
    for (std::uint64_t c = 0; c < cfg.columns(); ++c) {
      const cplx want = oracle_entry(cfg, snaps[c], n, tx.at(n, c));
      max_rel = std::max(max_rel, std::abs(rx.at(n, c) - want) / std::abs(want));
    }
  }
  CHECK(max_rel < 1e-9);
}

TEST_CASE("synthesis is linear in the scatter set") {
  const WaveformConfig cfg = desk(16, 1, 4);
  FrameMatrix tx = generate_tx_frame(cfg, SymbolAlphabet::qpsk(), 4);

  const std::vector<ScatterPoint> set_a = {{4.0, 0.8, 0.0}, {6.5, 0.3, 0.0}};
  const std::vector<ScatterPoint> set_b = {{2.2, 1.1, 0.0}};
  std::vector<ScatterPoint> both = set_a;
  both.insert(both.end(), set_b.begin(), set_b.end());

  const FrameMatrix ra = synthesize_rx(tx, grid_snapshots(cfg, set_a), cfg, {});
  const FrameMatrix rb = synthesize_rx(tx, grid_snapshots(cfg, set_b), cfg, {});
  const FrameMatrix rab = synthesize_rx(tx, grid_snapshots(cfg, both), cfg, {});

  for (std::size_t i = 0; i < rab.size(); ++i) {
    const cplx sum = ra.data()[i] + rb.data()[i];
    CHECK(std::abs(rab.data()[i] - sum) <= 1e-12 * std::abs(sum));
  }
}

TEST_CASE("reflectivity scaling is exact") {
  const WaveformConfig cfg = desk(8, 1, 3);
  FrameMatrix tx(cfg.subcarriers, cfg.columns());
  for (auto& v : tx.data()) v = cplx{1.0, 0.0};
  const double k = 3.25;
  const FrameMatrix r1 = synthesize_rx(tx, grid_snapshots(cfg, {{5.0, 1.0, 0.0}}), cfg, {});
  const FrameMatrix rk = synthesize_rx(tx, grid_snapshots(cfg, {{5.0, k, 0.0}}), cfg, {});
  for (std::size_t i = 0; i < r1.size(); ++i) {
    CHECK(std::abs(rk.data()[i] - k * r1.data()[i]) <= 4e-16 * std::abs(k * r1.data()[i]));
  }
}

TEST_CASE("snapshot grid errors") {
  const WaveformConfig cfg = desk(8, 2, 2);
  FrameMatrix tx(cfg.subcarriers, cfg.columns());
  for (auto& v : tx.data()) v = cplx{1.0, 0.0};

  auto snaps = grid_snapshots(cfg, {{5.0, 1.0, 0.0}});
  snaps[1].time += 1e-9;
  try {
    synthesize_rx(tx, snaps, cfg, {});
    CHECK(false);
  } catch (const SimError& e) {
    CHECK(e.code() == ErrorCode::SnapshotTimeMismatch);
  }

  auto short_snaps = grid_snapshots(cfg, {{5.0, 1.0, 0.0}});
  short_snaps.pop_back();
  try {
    synthesize_rx(tx, short_snaps, cfg, {});
    CHECK(false);
  } catch (const SimError& e) {
    CHECK(e.code() == ErrorCode::DimensionMismatch);
  }

  auto uneven = grid_snapshots(cfg, {{5.0, 1.0, 0.0}});
  uneven[2].points.push_back({6.0, 1.0, 0.0});
  CHECK_THROWS_AS(synthesize_rx(tx, uneven, cfg, {}), SimError);

  FrameMatrix wrong(cfg.subcarriers + 1, cfg.columns());
  CHECK_THROWS_AS(synthesize_rx(wrong, grid_snapshots(cfg, {{5.0, 1.0, 0.0}}), cfg, {}), SimError);
}

TEST_CASE("noise determinism and level") {
  const WaveformConfig cfg = desk(64, 1, 64);
  const FrameMatrix tx = generate_tx_frame(cfg, SymbolAlphabet::qpsk(), 21);
  const auto snaps = grid_snapshots(cfg, {{5.0, 1.0, 0.0}});

  NoiseConfig noise;
  noise.enabled = true;
  noise.snr_db = 10.0;
  noise.seed = 77;

  const FrameMatrix a = synthesize_rx(tx, snaps, cfg, noise);
  const FrameMatrix b = synthesize_rx(tx, snaps, cfg, noise);
  CHECK(a.data() == b.data());

  NoiseConfig other = noise;
  other.seed = 78;
  const FrameMatrix c = synthesize_rx(tx, snaps, cfg, other);
  CHECK(a.data() != c.data());

  // measured noise power tracks the requested SNR
  const FrameMatrix clean = synthesize_rx(tx, snaps, cfg, {});
  double signal = 0.0, noise_power = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    signal += std::norm(clean.data()[i]);
    noise_power += std::norm(a.data()[i] - clean.data()[i]);
  }
  const double snr_meas = 10.0 * std::log10(signal / noise_power);
  CHECK(snr_meas == doctest::Approx(10.0).epsilon(0.05));
}

TEST_CASE("parallel synthesis is bit-identical to serial") {
  const WaveformConfig cfg = desk(32, 1, 40);
  const FrameMatrix tx = generate_tx_frame(cfg, SymbolAlphabet::qpsk(), 3);
  std::vector<ScatterSnapshot> snaps(cfg.columns());
  for (std::uint64_t c = 0; c < cfg.columns(); ++c) {
    snaps[c] = point_target_snapshot(5.0, -2.0, column_time(cfg, c));
  }
  NoiseConfig noise{true, 20.0, 5};
  const FrameMatrix serial = synthesize_rx(tx, snaps, cfg, noise, 1);
  const FrameMatrix parallel = synthesize_rx(tx, snaps, cfg, noise, 4);
  CHECK(serial.data() == parallel.data());
}
