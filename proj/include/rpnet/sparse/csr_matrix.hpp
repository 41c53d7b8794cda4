// SPDX-License-Identifier: MIT

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>

#include "rpnet/memory.hpp"
#include "rpnet/sparse/dense_matrix.hpp"

namespace rpnet {

/// Compressed sparse row matrix.
///
/// Invariants (checked on construction):
///  - row_offsets has n_rows + 1 non-decreasing entries, front() == 0 and
///    back() == nnz;
///  - column indices within a row are strictly increasing and < n_cols;
///  - col_indices and values have equal length.
///
/// Instances are immutable once built and may be shared read-only.
class CsrMatrix {
 public:
  CsrMatrix() : row_offsets_{0} {}

  /// All-zero n_rows x n_cols matrix.
  CsrMatrix(std::size_t n_rows, std::size_t n_cols);

  /// Throws FormatError if the invariants above do not hold.
  CsrMatrix(std::size_t n_rows, std::size_t n_cols,
            Buffer<std::size_t> row_offsets, Buffer<Index> col_indices,
            Buffer<double> values);

  static CsrMatrix identity(std::size_t n);

  /// Keeps every entry with value != 0.
  static CsrMatrix from_dense(const DenseMatrix& m);

  std::size_t rows() const noexcept { return n_rows_; }
  std::size_t cols() const noexcept { return n_cols_; }
  std::size_t nnz() const noexcept { return values_.size(); }

  std::span<const std::size_t> row_offsets() const noexcept {
    return row_offsets_;
  }
  std::span<const Index> col_indices() const noexcept { return col_indices_; }
  std::span<const double> values() const noexcept { return values_; }

  std::size_t row_nnz(std::size_t r) const noexcept {
    return row_offsets_[r + 1] - row_offsets_[r];
  }
  std::span<const Index> row_indices(std::size_t r) const noexcept {
    return std::span<const Index>(col_indices_)
        .subspan(row_offsets_[r], row_nnz(r));
  }
  std::span<const double> row_values(std::size_t r) const noexcept {
    return std::span<const double>(values_).subspan(row_offsets_[r],
                                                    row_nnz(r));
  }

  /// Value at (r, c); zero when not stored. O(log row_nnz).
  double at(std::size_t r, std::size_t c) const noexcept;

  DenseMatrix to_dense() const;

  std::size_t storage_bytes() const noexcept;

  friend bool operator==(const CsrMatrix& a, const CsrMatrix& b) {
    return a.n_rows_ == b.n_rows_ && a.n_cols_ == b.n_cols_ &&
           a.row_offsets_ == b.row_offsets_ &&
           a.col_indices_ == b.col_indices_ && a.values_ == b.values_;
  }

 private:
  std::size_t n_rows_ = 0;
  std::size_t n_cols_ = 0;
  Buffer<std::size_t> row_offsets_;
  Buffer<Index> col_indices_;
  Buffer<double> values_;
};

/// Incremental row-by-row builder. Entries of the current row may be pushed
/// in any column order; finish_row() sorts them and rejects duplicates.
class CsrBuilder {
 public:
  CsrBuilder(std::size_t n_cols, std::size_t reserve_nnz = 0);

  void push(Index col, double value);
  void finish_row();

  std::size_t rows() const noexcept { return row_offsets_.size() - 1; }

  /// Consumes the builder.
  CsrMatrix build() &&;

 private:
  std::size_t n_cols_;
  std::size_t row_begin_ = 0;
  Buffer<std::size_t> row_offsets_;
  Buffer<Index> col_indices_;
  Buffer<double> values_;
};

/// nnz / (rows * cols); 0 for an empty shape.
double density(const CsrMatrix& a) noexcept;

struct RowNnzStats {
  std::size_t max = 0;
  double mean = 0.0;
};

RowNnzStats nnz_per_row_stats(const CsrMatrix& a) noexcept;

/// 64-bit hash of the sparsity pattern (shape, offsets, column indices);
/// values are ignored.
std::uint64_t pattern_hash(const CsrMatrix& a) noexcept;

/// 64-bit hash over shape and raw value bits.
std::uint64_t content_hash(const CsrMatrix& a) noexcept;
std::uint64_t content_hash(const DenseMatrix& a) noexcept;

}  // namespace rpnet
