// SPDX-License-Identifier: MIT

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>

#include "rpnet/projection/normalization.hpp"
#include "rpnet/sparse/dense_matrix.hpp"

namespace rpnet::projection {

// Binary layout, little-endian:
//   "RPDB" | u32 version | u64 rows | u64 cols | rows*cols reals (row-major)
//   [u8 stats kind | u64 len | f64 arrays]
// Version 1 stores 32-bit reals and is the persisted format. Version 2
// stores 64-bit reals; the engine uses it for spill files so that blocked
// projection stays within fp-reassociation tolerance.
enum class RpdbPrecision : std::uint32_t { Float32 = 1, Float64 = 2 };

struct RpdbContents {
  DenseMatrix data;
  std::optional<NormalizationStats> stats;
};

void write_dense(std::ostream& out, const DenseMatrix& r,
                 const NormalizationStats* stats = nullptr,
                 RpdbPrecision precision = RpdbPrecision::Float32);
/// Throws FormatError on bad magic, unknown version or truncation.
RpdbContents read_dense(std::istream& in);

/// File wrappers; throw IoError when the file cannot be opened or written.
void save_dense(const DenseMatrix& r, const NormalizationStats* stats,
                const std::filesystem::path& path,
                RpdbPrecision precision = RpdbPrecision::Float32);
RpdbContents load_dense(const std::filesystem::path& path);

}  // namespace rpnet::projection
