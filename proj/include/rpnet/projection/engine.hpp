// SPDX-License-Identifier: MIT

#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <utility>

#include "rpnet/rp/schemes.hpp"
#include "rpnet/sparse/csr_matrix.hpp"
#include "rpnet/sparse/dense_matrix.hpp"

namespace rpnet::projection {

enum class SpillMode {
  Auto,    // spill when memory_budget is set and the results would not fit
  Never,
  Always,
};

/// How A (n x d) is cut into h row slices and P (d x k) into v column
/// slices. Slice widths follow split_ranges.
struct ProjectionPlan {
  rp::RpSchemeSpec spec;
  std::size_t h = 1;
  std::size_t v = 1;
  /// Advisory bound on the working set in bytes.
  std::optional<std::size_t> memory_budget;
  /// Where R_ij blocks go when spilling. Empty: a fresh directory under the
  /// system temp path.
  std::filesystem::path spill_dir;
  SpillMode spill = SpillMode::Auto;
  /// Leave spill files in place after assembly.
  bool keep_spill_files = false;

  void validate() const;
};

struct ProjectionReport {
  bool spilled = false;
  bool streaming_count_sketch = false;
  std::size_t blocks = 0;
  /// Largest A_i + P_j + R_ij triple seen, in bytes.
  std::size_t max_triple_bytes = 0;
  std::filesystem::path spill_dir;
};

/// A * P with P = generate(plan.spec), computed block by block as
/// R_ij = A_i P_j. The summation order of every output entry does not
/// depend on h or v, so all partitions agree bit for bit with one worker.
DenseMatrix project(const CsrMatrix& a, const ProjectionPlan& plan,
                    ProjectionReport* report = nullptr);

/// A * P for an already generated matrix (or slice), choosing the kernel by
/// storage: csr x dense, or sparse x sparse scattered into a dense result.
DenseMatrix multiply(const CsrMatrix& a, const rp::RpMatrix& p);

/// Expected bytes of one A_i + P_j + R_ij triple for the largest slices.
std::size_t slice_triple_bytes(const CsrMatrix& a, const rp::RpSchemeSpec& spec,
                               std::size_t h, std::size_t v);

/// Smallest h * v (preferring fewer projection slices) whose triple fits
/// `budget`. Throws InvalidArgument when even single rows and columns do not.
std::pair<std::size_t, std::size_t> suggest_slicing(
    const CsrMatrix& a, const rp::RpSchemeSpec& spec, std::size_t budget);

/// Bytes a fully materialized P would need at 4-byte reals (dense schemes)
/// or CSR with 4-byte values and indices (sparse schemes, expected nnz).
double projection_matrix_bytes(const rp::RpSchemeSpec& spec);

}  // namespace rpnet::projection
