#include "omds/txgen.hpp"

#include <cmath>
#include <set>
#include <utility>

#include "omds/rng.hpp"
#include "parallel.hpp"

namespace omds {

namespace {
constexpr std::uint64_t kTxRole = 0;
}

SymbolAlphabet SymbolAlphabet::qpsk() {
  const double s = 1.0 / std::sqrt(2.0);
  return {{{s, s}, {s, -s}, {-s, s}, {-s, -s}}, 2};
}

SymbolAlphabet SymbolAlphabet::bpsk() {
  return {{{1.0, 0.0}, {-1.0, 0.0}}, 1};
}

SymbolAlphabet SymbolAlphabet::qam16() {
  const double s = 1.0 / std::sqrt(10.0);
  std::vector<cplx> pts;
  pts.reserve(16);
  for (int re = -3; re <= 3; re += 2) {
    for (int im = -3; im <= 3; im += 2) {
      pts.emplace_back(re * s, im * s);
    }
  }
  return {std::move(pts), 4};
}

SymbolAlphabet SymbolAlphabet::from(Alphabet a) {
  switch (a) {
    case Alphabet::Bpsk:
      return bpsk();
    case Alphabet::Qam16:
      return qam16();
    case Alphabet::Qpsk:
      break;
  }
  return qpsk();
}

void SymbolAlphabet::validate() const {
  if (points.empty()) {
    fail(ErrorCode::NonPositiveParameter, "empty constellation");
  }
  double power = 0.0;
  std::set<std::pair<double, double>> seen;
  for (const cplx& p : points) {
    power += std::norm(p);
    if (!seen.insert({p.real(), p.imag()}).second) {
      fail(ErrorCode::NonPositiveParameter, "duplicate constellation point");
    }
    if (std::abs(p) == 0.0) {
      fail(ErrorCode::ZeroTxSymbol, "constellation contains the origin");
    }
  }
  power /= static_cast<double>(points.size());
  if (std::abs(power - 1.0) > 1e-12) {
    fail(ErrorCode::NonPositiveParameter, "constellation mean power is not 1");
  }
}

FrameMatrix generate_tx_frame(const WaveformConfig& cfg,
                              const SymbolAlphabet& alphabet,
                              std::uint64_t seed, unsigned threads) {
  alphabet.validate();
  const std::uint32_t n_rows = cfg.subcarriers;
  const std::uint64_t n_cols = cfg.columns();
  FrameMatrix f(n_rows, n_cols);
  const std::uint64_t n_points = alphabet.points.size();

  detail::parallel_chunks(n_cols, threads, [&](std::uint64_t begin, std::uint64_t end) {
    for (std::uint64_t c = begin; c < end; ++c) {
      SplitMix64 rng(substream_seed(seed, c, kTxRole));
      for (std::uint32_t n = 0; n < n_rows; ++n) {
        f.at(n, c) = alphabet.points[rng.uniform_below(n_points)];
      }
    }
  });
  return f;
}

}  // namespace omds
