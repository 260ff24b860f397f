#include <benchmark/benchmark.h>

#include <vector>

#include "omds/channel.hpp"
#include "omds/estimate.hpp"
#include "omds/microdoppler.hpp"
#include "omds/txgen.hpp"

using namespace omds;

namespace {

WaveformConfig bench_config(std::uint32_t n, std::uint32_t l) {
  WaveformConfig w;
  w.carrier_frequency = 28e9;
  w.bandwidth = 1.5e9;
  w.subcarriers = n;
  w.symbols_per_frame = 1;
  w.packages = l;
  w.cp_duration = 5e-8;
  w.package_interval = 5e-5;
  return validate_config(w);
}

std::vector<ScatterSnapshot> fan_snaps(const WaveformConfig& cfg) {
  FanTarget fan;
  fan.center = {5.0, 0.0, 0.0};
  fan.blade_length = 0.1;
  fan.angular_velocity = 2.0 * 3.14159265358979 * 10.0;
  std::vector<ScatterSnapshot> snaps(cfg.columns());
  for (std::uint64_t c = 0; c < cfg.columns(); ++c) {
    snaps[c] = fan_snapshot(fan, {0.0, 0.0, 0.0}, column_time(cfg, c));
  }
  return snaps;
}

void BM_GenerateTxFrame(benchmark::State& state) {
  const WaveformConfig cfg = bench_config(256, static_cast<std::uint32_t>(state.range(0)));
  const SymbolAlphabet a = SymbolAlphabet::qpsk();
  for (auto _ : state) {
    FrameMatrix f = generate_tx_frame(cfg, a, 1);
    benchmark::DoNotOptimize(f.data().data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(cfg.columns()) *
                          cfg.subcarriers);
}
BENCHMARK(BM_GenerateTxFrame)->Arg(256)->Arg(1024);

void BM_SynthesizeRx(benchmark::State& state) {
  const WaveformConfig cfg = bench_config(128, static_cast<std::uint32_t>(state.range(0)));
  const FrameMatrix tx = generate_tx_frame(cfg, SymbolAlphabet::qpsk(), 1);
  const auto snaps = fan_snaps(cfg);
  for (auto _ : state) {
    FrameMatrix rx = synthesize_rx(tx, snaps, cfg, {});
    benchmark::DoNotOptimize(rx.data().data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(cfg.columns()) *
                          cfg.subcarriers * 5);
}
BENCHMARK(BM_SynthesizeRx)->Arg(512)->Arg(2048);

void BM_Periodogram(benchmark::State& state) {
  const WaveformConfig cfg = bench_config(256, 256);
  const FrameMatrix tx = generate_tx_frame(cfg, SymbolAlphabet::qpsk(), 1);
  std::vector<ScatterSnapshot> snaps(cfg.columns());
  for (std::uint64_t c = 0; c < cfg.columns(); ++c) {
    snaps[c] = point_target_snapshot(5.0, -2.0, column_time(cfg, c));
  }
  const FrameMatrix f = channel_matrix(synthesize_rx(tx, snaps, cfg, {}), tx);
  const auto pad = static_cast<std::uint32_t>(state.range(0));
  for (auto _ : state) {
    RangeDopplerMap map = periodogram(f, pad, pad, cfg);
    benchmark::DoNotOptimize(map.power.data());
  }
}
BENCHMARK(BM_Periodogram)->Arg(256)->Arg(1024);

void BM_Stft(benchmark::State& state) {
  const WaveformConfig cfg = bench_config(128, 10000);
  std::vector<cplx> series(cfg.columns());
  for (std::size_t k = 0; k < series.size(); ++k) {
    series[k] = std::polar(1.0, 0.05 * static_cast<double>(k));
  }
  const StftConfig stft{256, 256, 16, StftWindow::Gaussian, 0.0};
  for (auto _ : state) {
    Spectrogram spec = stft_spectrogram(series, stft, cfg.package_interval);
    benchmark::DoNotOptimize(spec.power.data());
  }
}
BENCHMARK(BM_Stft);

}  // namespace

BENCHMARK_MAIN();
