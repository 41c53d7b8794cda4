// SPDX-License-Identifier: MIT

#include "rpnet/sparse/csr_matrix.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <string>
#include <vector>

#include "rpnet/error.hpp"

namespace rpnet {
namespace {

struct Fnv1a {
  std::uint64_t h = 1469598103934665603ULL;
  void mix(std::uint64_t v) noexcept {
    for (int i = 0; i < 8; ++i) {
      h ^= (v >> (8 * i)) & 0xffU;
      h *= 1099511628211ULL;
    }
  }
};

}  // namespace

CsrMatrix::CsrMatrix(std::size_t n_rows, std::size_t n_cols)
    : n_rows_(n_rows), n_cols_(n_cols), row_offsets_(n_rows + 1, 0) {}

CsrMatrix::CsrMatrix(std::size_t n_rows, std::size_t n_cols,
                     Buffer<std::size_t> row_offsets,
                     Buffer<Index> col_indices, Buffer<double> values)
    : n_rows_(n_rows),
      n_cols_(n_cols),
      row_offsets_(std::move(row_offsets)),
      col_indices_(std::move(col_indices)),
      values_(std::move(values)) {
  if (row_offsets_.size() != n_rows_ + 1) {
    throw FormatError("csr: row_offsets must have n_rows + 1 entries");
  }
  if (col_indices_.size() != values_.size()) {
    throw FormatError("csr: col_indices and values differ in length");
  }
  if (row_offsets_.front() != 0 || row_offsets_.back() != values_.size()) {
    throw FormatError("csr: row_offsets must span [0, nnz]");
  }
  for (std::size_t r = 0; r < n_rows_; ++r) {
    const std::size_t b = row_offsets_[r];
    const std::size_t e = row_offsets_[r + 1];
    if (e < b) throw FormatError("csr: row_offsets decrease at row " +
                                 std::to_string(r));
    for (std::size_t p = b; p < e; ++p) {
      if (col_indices_[p] >= n_cols_) {
        throw FormatError("csr: column index out of range in row " +
                          std::to_string(r));
      }
      if (p > b && col_indices_[p] <= col_indices_[p - 1]) {
        throw FormatError("csr: column indices not strictly increasing in row " +
                          std::to_string(r));
      }
    }
  }
}

CsrMatrix CsrMatrix::identity(std::size_t n) {
  Buffer<std::size_t> offsets(n + 1);
  Buffer<Index> cols(n);
  Buffer<double> vals(n, 1.0);
  std::iota(offsets.begin(), offsets.end(), std::size_t{0});
  std::iota(cols.begin(), cols.end(), Index{0});
  return CsrMatrix(n, n, std::move(offsets), std::move(cols), std::move(vals));
}

CsrMatrix CsrMatrix::from_dense(const DenseMatrix& m) {
  CsrBuilder b(m.cols());
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) {
      if (m(r, c) != 0.0) b.push(static_cast<Index>(c), m(r, c));
    }
    b.finish_row();
  }
  return std::move(b).build();
}

double CsrMatrix::at(std::size_t r, std::size_t c) const noexcept {
  const auto idx = row_indices(r);
  const auto it = std::lower_bound(idx.begin(), idx.end(), c);
  if (it == idx.end() || *it != c) return 0.0;
  return row_values(r)[static_cast<std::size_t>(it - idx.begin())];
}

DenseMatrix CsrMatrix::to_dense() const {
  DenseMatrix out(n_rows_, n_cols_);
  for (std::size_t r = 0; r < n_rows_; ++r) {
    for (std::size_t p = row_offsets_[r]; p < row_offsets_[r + 1]; ++p) {
      out(r, col_indices_[p]) = values_[p];
    }
  }
  return out;
}

std::size_t CsrMatrix::storage_bytes() const noexcept {
  return row_offsets_.capacity() * sizeof(std::size_t) +
         col_indices_.capacity() * sizeof(Index) +
         values_.capacity() * sizeof(double);
}

CsrBuilder::CsrBuilder(std::size_t n_cols, std::size_t reserve_nnz)
    : n_cols_(n_cols), row_offsets_{0} {
  col_indices_.reserve(reserve_nnz);
  values_.reserve(reserve_nnz);
}

void CsrBuilder::push(Index col, double value) {
  if (col >= n_cols_) throw FormatError("csr builder: column out of range");
  col_indices_.push_back(col);
  values_.push_back(value);
}

void CsrBuilder::finish_row() {
  const std::size_t end = col_indices_.size();
  bool sorted = true;
  for (std::size_t p = row_begin_ + 1; p < end; ++p) {
    if (col_indices_[p] <= col_indices_[p - 1]) {
      sorted = false;
      break;
    }
  }
  if (!sorted) {
    std::vector<std::pair<Index, double>> tmp;
    tmp.reserve(end - row_begin_);
    for (std::size_t p = row_begin_; p < end; ++p) {
      tmp.emplace_back(col_indices_[p], values_[p]);
    }
    std::sort(tmp.begin(), tmp.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    for (std::size_t i = 0; i < tmp.size(); ++i) {
      if (i > 0 && tmp[i].first == tmp[i - 1].first) {
        throw FormatError("csr builder: duplicate column in row");
      }
      col_indices_[row_begin_ + i] = tmp[i].first;
      values_[row_begin_ + i] = tmp[i].second;
    }
  }
  row_offsets_.push_back(end);
  row_begin_ = end;
}

CsrMatrix CsrBuilder::build() && {
  if (row_begin_ != col_indices_.size()) finish_row();
  const std::size_t n_rows = row_offsets_.size() - 1;
  return CsrMatrix(n_rows, n_cols_, std::move(row_offsets_),
                   std::move(col_indices_), std::move(values_));
}

double density(const CsrMatrix& a) noexcept {
  const double cells =
      static_cast<double>(a.rows()) * static_cast<double>(a.cols());
  return cells == 0.0 ? 0.0 : static_cast<double>(a.nnz()) / cells;
}

RowNnzStats nnz_per_row_stats(const CsrMatrix& a) noexcept {
  RowNnzStats s;
  for (std::size_t r = 0; r < a.rows(); ++r) {
    s.max = std::max(s.max, a.row_nnz(r));
  }
  if (a.rows() > 0) {
    s.mean = static_cast<double>(a.nnz()) / static_cast<double>(a.rows());
  }
  return s;
}

std::uint64_t pattern_hash(const CsrMatrix& a) noexcept {
  Fnv1a h;
  h.mix(a.rows());
  h.mix(a.cols());
  for (std::size_t o : a.row_offsets()) h.mix(o);
  for (Index c : a.col_indices()) h.mix(c);
  return h.h;
}

std::uint64_t content_hash(const CsrMatrix& a) noexcept {
  Fnv1a h;
  h.mix(pattern_hash(a));
  for (double v : a.values()) h.mix(std::bit_cast<std::uint64_t>(v));
  return h.h;
}

std::uint64_t content_hash(const DenseMatrix& a) noexcept {
  Fnv1a h;
  h.mix(a.rows());
  h.mix(a.cols());
  for (double v : a.data()) h.mix(std::bit_cast<std::uint64_t>(v));
  return h.h;
}

}  // namespace rpnet
