#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "omds/errors.hpp"

namespace omds {

using cplx = std::complex<double>;

/// Complex N x (M*L) symbol grid, row-major. Row n is a subcarrier, column
/// c = m + l*M is OFDM symbol m of package l. Holds F_Tx, F_Rx or the
/// channel matrix F.
class FrameMatrix {
 public:
  FrameMatrix() = default;
  FrameMatrix(std::uint32_t rows, std::uint64_t cols)
      : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows) * cols) {}

  std::uint32_t rows() const { return rows_; }
  std::uint64_t cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }

  cplx& at(std::uint32_t n, std::uint64_t c) {
    return data_[static_cast<std::size_t>(n) * cols_ + c];
  }
  const cplx& at(std::uint32_t n, std::uint64_t c) const {
    return data_[static_cast<std::size_t>(n) * cols_ + c];
  }

  std::vector<cplx>& data() { return data_; }
  const std::vector<cplx>& data() const { return data_; }

  bool same_shape(const FrameMatrix& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_;
  }

 private:
  std::uint32_t rows_ = 0;
  std::uint64_t cols_ = 0;
  std::vector<cplx> data_;
};

}  // namespace omds
