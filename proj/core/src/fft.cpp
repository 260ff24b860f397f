#include "fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <mutex>

namespace omds::detail {

namespace {
// FFTW planning is not thread-safe even with FFTW_ESTIMATE.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

Dft1d::Dft1d(std::size_t length, int sign) : length_(length) {
  in_ = reinterpret_cast<std::complex<double>*>(fftw_alloc_complex(length));
  out_ = reinterpret_cast<std::complex<double>*>(fftw_alloc_complex(length));
  std::lock_guard<std::mutex> lock(planner_mutex());
  plan_ = fftw_plan_dft_1d(static_cast<int>(length),
                           reinterpret_cast<fftw_complex*>(in_),
                           reinterpret_cast<fftw_complex*>(out_),
                           sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD,
                           FFTW_ESTIMATE);
}

Dft1d::~Dft1d() {
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(static_cast<fftw_plan>(plan_));
  }
  fftw_free(in_);
  fftw_free(out_);
}

void Dft1d::run(std::span<const std::complex<double>> input,
                std::vector<std::complex<double>>& out) {
  const std::size_t n = std::min(input.size(), length_);
  std::copy(input.begin(), input.begin() + n, in_);
  std::fill(in_ + n, in_ + length_, std::complex<double>{0.0, 0.0});
  fftw_execute(static_cast<fftw_plan>(plan_));
  out.assign(out_, out_ + length_);
}

}  // namespace omds::detail
