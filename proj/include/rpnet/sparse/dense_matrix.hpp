// SPDX-License-Identifier: MIT

#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>

#include "rpnet/memory.hpp"

namespace rpnet {

/// Row-major dense matrix of 64-bit reals.
class DenseMatrix {
 public:
  DenseMatrix() = default;

  /// Zero-initialized rows x cols matrix.
  DenseMatrix(std::size_t rows, std::size_t cols);

  /// Takes ownership of row-major data; throws InvalidArgument when
  /// data.size() != rows * cols.
  DenseMatrix(std::size_t rows, std::size_t cols, Buffer<double> data);

  static DenseMatrix from_rows(
      std::initializer_list<std::initializer_list<double>> rows);
  static DenseMatrix identity(std::size_t n);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  double& operator()(std::size_t r, std::size_t c) noexcept {
    return data_[r * cols_ + c];
  }
  double operator()(std::size_t r, std::size_t c) const noexcept {
    return data_[r * cols_ + c];
  }

  std::span<double> row(std::size_t r) noexcept {
    return {data_.data() + r * cols_, cols_};
  }
  std::span<const double> row(std::size_t r) const noexcept {
    return {data_.data() + r * cols_, cols_};
  }

  std::span<double> data() noexcept { return data_; }
  std::span<const double> data() const noexcept { return data_; }

  void fill(double v) noexcept;

  /// Bytes held by the value buffer.
  std::size_t storage_bytes() const noexcept {
    return data_.capacity() * sizeof(double);
  }

  friend bool operator==(const DenseMatrix& a, const DenseMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  Buffer<double> data_;
};

DenseMatrix transpose(const DenseMatrix& m);

/// max |a - b| over all entries; shapes must match.
double max_abs_diff(const DenseMatrix& a, const DenseMatrix& b);

/// ||a - b||_F / max(||b||_F, tiny).
double relative_frobenius_distance(const DenseMatrix& a, const DenseMatrix& b);

double frobenius_norm(const DenseMatrix& m);

bool all_finite(const DenseMatrix& m) noexcept;

// Dense products (Eigen-backed): a*b, a^T*b, a*b^T.
DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix matmul_at_b(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix matmul_a_bt(const DenseMatrix& a, const DenseMatrix& b);

}  // namespace rpnet
