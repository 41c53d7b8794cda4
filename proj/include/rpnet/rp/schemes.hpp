// SPDX-License-Identifier: MIT

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>

#include "rpnet/sparse/csr_matrix.hpp"
#include "rpnet/sparse/dense_matrix.hpp"

namespace rpnet::rp {

enum class Scheme { Gaussian, Achlioptas, Li, Srht, CountSketch };

std::string_view to_string(Scheme s) noexcept;

/// Accepts the lower-case CLI names: gaussian, achlioptas, li, srht,
/// countsketch. Throws InvalidArgument otherwise.
Scheme parse_scheme(std::string_view name);

/// Achlioptas, Li and Count Sketch matrices are stored sparse.
bool is_sparse_scheme(Scheme s) noexcept;

/// Parameters of one projection matrix P (d x k).
struct RpSchemeSpec {
  Scheme kind = Scheme::Gaussian;
  std::size_t d = 1;
  std::size_t k = 1;
  std::uint64_t seed = 0;
  /// Li: expected 1/s fraction of non-zeros. Defaults to sqrt(d).
  std::optional<double> li_s;
  /// SRHT: sparsity of S. Defaults to min(1, max(ln^2(n_hint), 8) / d').
  std::optional<double> srht_q;
  /// SRHT: number of examples used in the default q; 0 means d.
  std::size_t srht_n_hint = 0;

  /// Throws InvalidArgument when d, k, s or q are out of range.
  void validate() const;

  double li_s_value() const;
  /// d rounded up to a power of two.
  std::size_t srht_padded_dim() const;
  double srht_q_value() const;
};

/// A generated projection matrix (or a column slice of one).
struct RpMatrix {
  RpSchemeSpec spec;
  /// First global column covered by `storage`.
  std::size_t col_begin = 0;
  std::variant<DenseMatrix, CsrMatrix> storage;

  bool is_sparse() const noexcept {
    return std::holds_alternative<CsrMatrix>(storage);
  }
  const DenseMatrix& dense() const { return std::get<DenseMatrix>(storage); }
  const CsrMatrix& sparse() const { return std::get<CsrMatrix>(storage); }

  std::size_t rows() const noexcept;
  std::size_t cols() const noexcept;
  std::size_t nnz() const noexcept;
  DenseMatrix to_dense() const;
};

/// Dispatches on spec.kind.
RpMatrix generate(const RpSchemeSpec& spec);

/// Entries i.i.d. N(0, 1/k).
RpMatrix gen_gaussian(const RpSchemeSpec& spec);
/// Entries sqrt(3/k) * {+1 w.p. 1/6, 0 w.p. 2/3, -1 w.p. 1/6}.
RpMatrix gen_achlioptas(const RpSchemeSpec& spec);
/// Entries sqrt(s/k) * {+1 w.p. 1/(2s), 0 w.p. 1 - 1/s, -1 w.p. 1/(2s)}.
RpMatrix gen_li(const RpSchemeSpec& spec);
/// (1/sqrt(k)) D H S restricted to the first d rows of the padded
/// construction; see srht_from_parts.
RpMatrix gen_srht(const RpSchemeSpec& spec);
/// One +-1 per row in a uniformly chosen column.
RpMatrix gen_count_sketch(const RpSchemeSpec& spec);

/// Columns [begin, end) of the matrix generate(spec) would produce, bit
/// for bit. Every column draws from its own RngStream(seed, column), so any
/// slicing reassembles to the same matrix.
RpMatrix gen_columns(const RpSchemeSpec& spec, std::size_t begin,
                     std::size_t end);

/// Slice j of v: columns of width ceil(k/v), the last one holding the
/// remainder (may be empty when v does not divide k evenly enough).
/// Throws InvalidArgument unless j < v <= k.
RpMatrix gen_slice(const RpSchemeSpec& spec, std::size_t j, std::size_t v);

/// Builds (1/sqrt(k)) * D * (H_t / sqrt(t)) * S for t = signs.size() (a
/// power of two) and keeps the first d rows. s is t x k.
DenseMatrix srht_from_parts(std::size_t d, std::span<const double> signs,
                            const DenseMatrix& s);

/// Per-row hash of the Count Sketch matrix: output column and sign.
struct CountSketchCell {
  std::size_t column;
  double sign;
};
CountSketchCell count_sketch_cell(std::uint64_t seed, std::size_t k,
                                  std::size_t row) noexcept;

/// A * P for the Count Sketch P of (k, seed) without materializing P: each
/// stored entry of A is sign-flipped and added to its hashed column. Bit
/// identical to csr_csr_matmul(A, gen_count_sketch(...)) densified.
DenseMatrix apply_count_sketch_streaming(const CsrMatrix& a, std::size_t k,
                                         std::uint64_t seed);

}  // namespace rpnet::rp
