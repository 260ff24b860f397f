#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

namespace omds::detail {

/// Single 1-D complex DFT of fixed length backed by FFTW, with owned
/// aligned buffers. Plans use FFTW_ESTIMATE so the algorithm choice (and
/// therefore the output bits) never depends on runtime measurements.
/// sign = -1: exp(-j 2 pi k n / N) (forward); sign = +1: unnormalized
/// inverse. Not thread-safe; use one instance per thread.
class Dft1d {
 public:
  Dft1d(std::size_t length, int sign);
  ~Dft1d();
  Dft1d(const Dft1d&) = delete;
  Dft1d& operator=(const Dft1d&) = delete;

  std::size_t length() const { return length_; }

  /// Transforms `input` (zero-padded or truncated to the plan length) into
  /// `out`, which is resized to the plan length.
  void run(std::span<const std::complex<double>> input,
           std::vector<std::complex<double>>& out);

 private:
  std::size_t length_;
  void* plan_;  // fftw_plan
  std::complex<double>* in_;
  std::complex<double>* out_;
};

}  // namespace omds::detail
