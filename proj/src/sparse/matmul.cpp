// SPDX-License-Identifier: MIT

#include <algorithm>
#include <limits>

#include "rpnet/error.hpp"
#include "rpnet/sparse/ops.hpp"

namespace rpnet {

DenseMatrix csr_dense_matmul(const CsrMatrix& a, const DenseMatrix& p) {
  if (a.cols() != p.rows()) {
    throw DimensionMismatch("csr_dense_matmul: A.cols != P.rows");
  }
  const std::size_t k = p.cols();
  DenseMatrix out(a.rows(), k);
  for (std::size_t r = 0; r < a.rows(); ++r) {
    double* dst = out.row(r).data();
    const auto idx = a.row_indices(r);
    const auto val = a.row_values(r);
    for (std::size_t q = 0; q < idx.size(); ++q) {
      const double s = val[q];
      const double* src = p.row(idx[q]).data();
      for (std::size_t c = 0; c < k; ++c) dst[c] += s * src[c];
    }
  }
  return out;
}

DenseMatrix csr_csr_matmul_dense(const CsrMatrix& a, const CsrMatrix& p) {
  if (a.cols() != p.rows()) {
    throw DimensionMismatch("csr_csr_matmul_dense: A.cols != P.rows");
  }
  DenseMatrix out(a.rows(), p.cols());
  for (std::size_t r = 0; r < a.rows(); ++r) {
    double* dst = out.row(r).data();
    const auto idx = a.row_indices(r);
    const auto val = a.row_values(r);
    for (std::size_t q = 0; q < idx.size(); ++q) {
      const auto pc = p.row_indices(idx[q]);
      const auto pv = p.row_values(idx[q]);
      for (std::size_t t = 0; t < pc.size(); ++t) dst[pc[t]] += val[q] * pv[t];
    }
  }
  return out;
}

CsrMatrix csr_csr_matmul(const CsrMatrix& a, const CsrMatrix& p) {
  if (a.cols() != p.rows()) {
    throw DimensionMismatch("csr_csr_matmul: A.cols != P.rows");
  }
  const std::size_t n = a.rows();
  const std::size_t k = p.cols();
  constexpr std::size_t kUnset = std::numeric_limits<std::size_t>::max();

  // Symbolic pass: distinct output columns per row.
  Buffer<std::size_t> offsets(n + 1, 0);
  std::vector<std::size_t> marker(k, kUnset);
  for (std::size_t r = 0; r < n; ++r) {
    std::size_t count = 0;
    for (Index j : a.row_indices(r)) {
      for (Index c : p.row_indices(j)) {
        if (marker[c] != r) {
          marker[c] = r;
          ++count;
        }
      }
    }
    offsets[r + 1] = offsets[r] + count;
  }

  // Numeric pass.
  Buffer<Index> cols(offsets[n]);
  Buffer<double> vals(offsets[n]);
  std::vector<double> acc(k, 0.0);
  std::fill(marker.begin(), marker.end(), kUnset);
  std::vector<Index> touched;
  std::size_t out_pos = 0;
  Buffer<std::size_t> final_offsets(n + 1, 0);
  for (std::size_t r = 0; r < n; ++r) {
    touched.clear();
    const auto a_idx = a.row_indices(r);
    const auto a_val = a.row_values(r);
    for (std::size_t q = 0; q < a_idx.size(); ++q) {
      const double s = a_val[q];
      const auto p_idx = p.row_indices(a_idx[q]);
      const auto p_val = p.row_values(a_idx[q]);
      for (std::size_t t = 0; t < p_idx.size(); ++t) {
        const Index c = p_idx[t];
        if (marker[c] != r) {
          marker[c] = r;
          acc[c] = 0.0;
          touched.push_back(c);
        }
        acc[c] += s * p_val[t];
      }
    }
    std::sort(touched.begin(), touched.end());
    for (Index c : touched) {
      if (acc[c] != 0.0) {
        cols[out_pos] = c;
        vals[out_pos] = acc[c];
        ++out_pos;
      }
    }
    final_offsets[r + 1] = out_pos;
  }
  cols.resize(out_pos);
  vals.resize(out_pos);
  return CsrMatrix(n, k, std::move(final_offsets), std::move(cols),
                   std::move(vals));
}

}  // namespace rpnet
