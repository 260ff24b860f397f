#pragma once

#include <cstdint>
#include <vector>

#include "omds/frame.hpp"
#include "omds/params.hpp"

namespace omds {

/// Modulation alphabet, normalized to unit mean power so SNR settings are
/// alphabet-independent.
struct SymbolAlphabet {
  std::vector<cplx> points;
  int bits_per_symbol = 0;

  static SymbolAlphabet qpsk();
  static SymbolAlphabet bpsk();
  static SymbolAlphabet qam16();
  static SymbolAlphabet from(Alphabet a);

  /// Enforces unit mean power and distinct points.
  void validate() const;
};

/// Draws the transmitted frame: N x (M*L) uniform constellation points.
/// Column c uses substream (seed, c), so the result is bit-identical for
/// any thread count and reproducible across runs.
FrameMatrix generate_tx_frame(const WaveformConfig& cfg,
                              const SymbolAlphabet& alphabet,
                              std::uint64_t seed, unsigned threads = 1);

}  // namespace omds
