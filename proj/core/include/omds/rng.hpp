#pragma once

#include <cmath>
#include <cstdint>
#include <utility>

#include "omds/constants.hpp"

namespace omds {

/// splitmix64 generator. Small, fast and fully specified here, so streams
/// are bit-identical across platforms and compiler versions. It doubles as
/// the substream deriver: every slow-time column gets its own generator so
/// that parallel and serial generation produce the same bytes.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, n), rejection-sampled so there is no modulo bias.
  std::uint64_t uniform_below(std::uint64_t n) {
    const std::uint64_t rem = (~0ull % n + 1ull) % n;  // 2^64 mod n
    std::uint64_t x = next();
    if (rem != 0) {
      const std::uint64_t bound = 0ull - rem;
      while (x >= bound) x = next();
    }
    return x % n;
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Two independent standard normals (Box-Muller).
  std::pair<double, double> gaussian_pair() {
    const double u1 = 1.0 - uniform01();  // (0, 1]
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    return {r * std::cos(2.0 * kPi * u2), r * std::sin(2.0 * kPi * u2)};
  }

 private:
  std::uint64_t state_;
};

/// Deterministic substream seed for (seed, index) pairs. `role` separates
/// independent uses of the same configuration seed (symbol draws vs noise).
inline std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t index,
                                    std::uint64_t role = 0) {
  SplitMix64 s(seed ^ (0x9E3779B97F4A7C15ull * (index + 1)) ^
               (0xC2B2AE3D27D4EB4Full * role));
  return s.next();
}

}  // namespace omds
