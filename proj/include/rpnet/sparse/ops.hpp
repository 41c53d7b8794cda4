// SPDX-License-Identifier: MIT

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "rpnet/sparse/csr_matrix.hpp"
#include "rpnet/sparse/dense_matrix.hpp"

namespace rpnet {

/// A (n x d, sparse) times P (d x k, dense). Cost O(k * (nnz(A) + n)).
DenseMatrix csr_dense_matmul(const CsrMatrix& a, const DenseMatrix& p);

/// Sparse-sparse product in two passes: a symbolic pass sizes every output
/// row, a numeric pass accumulates into a dense scratch row and emits the
/// touched columns in increasing order. Entries that cancel to exactly zero
/// are dropped.
CsrMatrix csr_csr_matmul(const CsrMatrix& a, const CsrMatrix& p);

/// Sparse-sparse product written straight into a dense result; equal to
/// csr_csr_matmul(a, p).to_dense() including summation order.
DenseMatrix csr_csr_matmul_dense(const CsrMatrix& a, const CsrMatrix& p);

/// Rows [begin, end). Throws InvalidArgument unless begin < end <= rows.
CsrMatrix row_slice(const CsrMatrix& a, std::size_t begin, std::size_t end);
DenseMatrix row_slice(const DenseMatrix& a, std::size_t begin,
                      std::size_t end);

/// Columns [begin, end). Throws InvalidArgument unless begin < end <= cols.
CsrMatrix col_slice(const CsrMatrix& a, std::size_t begin, std::size_t end);
DenseMatrix col_slice(const DenseMatrix& a, std::size_t begin,
                      std::size_t end);

/// Stacks blocks on top of each other; all must share the column count.
CsrMatrix vstack(std::span<const CsrMatrix> blocks);
DenseMatrix vstack(std::span<const DenseMatrix> blocks);

/// Places blocks side by side; all must share the row count.
CsrMatrix hstack(std::span<const CsrMatrix> blocks);
DenseMatrix hstack(std::span<const DenseMatrix> blocks);

/// Gathers the listed rows, in order (duplicates allowed).
CsrMatrix gather_rows(const CsrMatrix& a, std::span<const std::size_t> rows);
DenseMatrix gather_rows(const DenseMatrix& a,
                        std::span<const std::size_t> rows);

/// Keeps the listed columns (strictly increasing) and renumbers them 0..m-1.
CsrMatrix select_columns(const CsrMatrix& a,
                         std::span<const std::size_t> columns);

/// Half-open [begin, end) bounds of `parts` near-equal contiguous blocks of
/// `total`: each block has ceil(total/parts) items except the remainder.
std::vector<std::pair<std::size_t, std::size_t>> split_ranges(
    std::size_t total, std::size_t parts);

}  // namespace rpnet
