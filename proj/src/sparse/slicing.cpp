// SPDX-License-Identifier: MIT

#include <algorithm>
#include <string>

#include "rpnet/error.hpp"
#include "rpnet/sparse/ops.hpp"

namespace rpnet {
namespace {

void check_range(std::size_t begin, std::size_t end, std::size_t bound,
                 const char* what) {
  if (!(begin < end && end <= bound)) {
    throw InvalidArgument(std::string(what) + ": invalid range [" +
                          std::to_string(begin) + ", " + std::to_string(end) +
                          ") for extent " + std::to_string(bound));
  }
}

}  // namespace

CsrMatrix row_slice(const CsrMatrix& a, std::size_t begin, std::size_t end) {
  check_range(begin, end, a.rows(), "row_slice");
  const auto off = a.row_offsets();
  const std::size_t base = off[begin];
  Buffer<std::size_t> offsets(end - begin + 1);
  for (std::size_t r = begin; r <= end; ++r) offsets[r - begin] = off[r] - base;
  Buffer<Index> cols(a.col_indices().begin() + base,
                     a.col_indices().begin() + off[end]);
  Buffer<double> vals(a.values().begin() + base, a.values().begin() + off[end]);
  return CsrMatrix(end - begin, a.cols(), std::move(offsets), std::move(cols),
                   std::move(vals));
}

DenseMatrix row_slice(const DenseMatrix& a, std::size_t begin,
                      std::size_t end) {
  check_range(begin, end, a.rows(), "row_slice");
  Buffer<double> data(a.data().begin() + begin * a.cols(),
                      a.data().begin() + end * a.cols());
  return DenseMatrix(end - begin, a.cols(), std::move(data));
}

CsrMatrix col_slice(const CsrMatrix& a, std::size_t begin, std::size_t end) {
  check_range(begin, end, a.cols(), "col_slice");
  Buffer<std::size_t> offsets(a.rows() + 1, 0);
  Buffer<Index> cols;
  Buffer<double> vals;
  for (std::size_t r = 0; r < a.rows(); ++r) {
    const auto idx = a.row_indices(r);
    const auto val = a.row_values(r);
    auto lo = std::lower_bound(idx.begin(), idx.end(), begin);
    auto hi = std::lower_bound(lo, idx.end(), end);
    for (auto it = lo; it != hi; ++it) {
      cols.push_back(static_cast<Index>(*it - begin));
      vals.push_back(val[static_cast<std::size_t>(it - idx.begin())]);
    }
    offsets[r + 1] = cols.size();
  }
  return CsrMatrix(a.rows(), end - begin, std::move(offsets), std::move(cols),
                   std::move(vals));
}

DenseMatrix col_slice(const DenseMatrix& a, std::size_t begin,
                      std::size_t end) {
  check_range(begin, end, a.cols(), "col_slice");
  DenseMatrix out(a.rows(), end - begin);
  for (std::size_t r = 0; r < a.rows(); ++r) {
    const auto src = a.row(r).subspan(begin, end - begin);
    std::copy(src.begin(), src.end(), out.row(r).begin());
  }
  return out;
}

CsrMatrix vstack(std::span<const CsrMatrix> blocks) {
  if (blocks.empty()) return CsrMatrix();
  const std::size_t n_cols = blocks.front().cols();
  std::size_t rows = 0;
  std::size_t nnz = 0;
  for (const auto& b : blocks) {
    if (b.cols() != n_cols) throw DimensionMismatch("vstack: column counts");
    rows += b.rows();
    nnz += b.nnz();
  }
  Buffer<std::size_t> offsets;
  offsets.reserve(rows + 1);
  offsets.push_back(0);
  Buffer<Index> cols;
  Buffer<double> vals;
  cols.reserve(nnz);
  vals.reserve(nnz);
  for (const auto& b : blocks) {
    const std::size_t base = cols.size();
    for (std::size_t r = 1; r <= b.rows(); ++r) {
      offsets.push_back(base + b.row_offsets()[r]);
    }
    cols.insert(cols.end(), b.col_indices().begin(), b.col_indices().end());
    vals.insert(vals.end(), b.values().begin(), b.values().end());
  }
  return CsrMatrix(rows, n_cols, std::move(offsets), std::move(cols),
                   std::move(vals));
}

DenseMatrix vstack(std::span<const DenseMatrix> blocks) {
  if (blocks.empty()) return DenseMatrix();
  const std::size_t n_cols = blocks.front().cols();
  std::size_t rows = 0;
  for (const auto& b : blocks) {
    if (b.cols() != n_cols) throw DimensionMismatch("vstack: column counts");
    rows += b.rows();
  }
  Buffer<double> data;
  data.reserve(rows * n_cols);
  for (const auto& b : blocks) {
    data.insert(data.end(), b.data().begin(), b.data().end());
  }
  return DenseMatrix(rows, n_cols, std::move(data));
}

CsrMatrix hstack(std::span<const CsrMatrix> blocks) {
  if (blocks.empty()) return CsrMatrix();
  const std::size_t n_rows = blocks.front().rows();
  std::size_t n_cols = 0;
  std::size_t nnz = 0;
  for (const auto& b : blocks) {
    if (b.rows() != n_rows) throw DimensionMismatch("hstack: row counts");
    n_cols += b.cols();
    nnz += b.nnz();
  }
  Buffer<std::size_t> offsets(n_rows + 1, 0);
  Buffer<Index> cols;
  Buffer<double> vals;
  cols.reserve(nnz);
  vals.reserve(nnz);
  for (std::size_t r = 0; r < n_rows; ++r) {
    std::size_t shift = 0;
    for (const auto& b : blocks) {
      const auto idx = b.row_indices(r);
      const auto val = b.row_values(r);
      for (std::size_t q = 0; q < idx.size(); ++q) {
        cols.push_back(static_cast<Index>(idx[q] + shift));
        vals.push_back(val[q]);
      }
      shift += b.cols();
    }
    offsets[r + 1] = cols.size();
  }
  return CsrMatrix(n_rows, n_cols, std::move(offsets), std::move(cols),
                   std::move(vals));
}

DenseMatrix hstack(std::span<const DenseMatrix> blocks) {
  if (blocks.empty()) return DenseMatrix();
  const std::size_t n_rows = blocks.front().rows();
  std::size_t n_cols = 0;
  for (const auto& b : blocks) {
    if (b.rows() != n_rows) throw DimensionMismatch("hstack: row counts");
    n_cols += b.cols();
  }
  DenseMatrix out(n_rows, n_cols);
  std::size_t shift = 0;
  for (const auto& b : blocks) {
    for (std::size_t r = 0; r < n_rows; ++r) {
      std::copy(b.row(r).begin(), b.row(r).end(),
                out.row(r).begin() + static_cast<std::ptrdiff_t>(shift));
    }
    shift += b.cols();
  }
  return out;
}

CsrMatrix gather_rows(const CsrMatrix& a, std::span<const std::size_t> rows) {
  Buffer<std::size_t> offsets(rows.size() + 1, 0);
  std::size_t nnz = 0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i] >= a.rows()) throw InvalidArgument("gather_rows: row index");
    nnz += a.row_nnz(rows[i]);
    offsets[i + 1] = nnz;
  }
  Buffer<Index> cols(nnz);
  Buffer<double> vals(nnz);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto idx = a.row_indices(rows[i]);
    const auto val = a.row_values(rows[i]);
    std::copy(idx.begin(), idx.end(),
              cols.begin() + static_cast<std::ptrdiff_t>(offsets[i]));
    std::copy(val.begin(), val.end(),
              vals.begin() + static_cast<std::ptrdiff_t>(offsets[i]));
  }
  return CsrMatrix(rows.size(), a.cols(), std::move(offsets), std::move(cols),
                   std::move(vals));
}

DenseMatrix gather_rows(const DenseMatrix& a,
                        std::span<const std::size_t> rows) {
  DenseMatrix out(rows.size(), a.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i] >= a.rows()) throw InvalidArgument("gather_rows: row index");
    std::copy(a.row(rows[i]).begin(), a.row(rows[i]).end(),
              out.row(i).begin());
  }
  return out;
}

CsrMatrix select_columns(const CsrMatrix& a,
                         std::span<const std::size_t> columns) {
  constexpr Index kDropped = ~Index{0};
  std::vector<Index> remap(a.cols(), kDropped);
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (columns[i] >= a.cols() || (i > 0 && columns[i] <= columns[i - 1])) {
      throw InvalidArgument("select_columns: columns must be increasing");
    }
    remap[columns[i]] = static_cast<Index>(i);
  }
  CsrBuilder b(columns.size());
  for (std::size_t r = 0; r < a.rows(); ++r) {
    const auto idx = a.row_indices(r);
    const auto val = a.row_values(r);
    for (std::size_t q = 0; q < idx.size(); ++q) {
      if (remap[idx[q]] != kDropped) b.push(remap[idx[q]], val[q]);
    }
    b.finish_row();
  }
  return std::move(b).build();
}

std::vector<std::pair<std::size_t, std::size_t>> split_ranges(
    std::size_t total, std::size_t parts) {
  if (parts == 0) throw InvalidArgument("split_ranges: zero parts");
  const std::size_t width = (total + parts - 1) / parts;
  std::vector<std::pair<std::size_t, std::size_t>> out;
  out.reserve(parts);
  for (std::size_t j = 0; j < parts; ++j) {
    const std::size_t b = std::min(total, j * width);
    const std::size_t e = std::min(total, b + width);
    out.emplace_back(b, e);
  }
  return out;
}

}  // namespace rpnet
