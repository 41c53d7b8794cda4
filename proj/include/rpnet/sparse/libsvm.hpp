// SPDX-License-Identifier: MIT

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <vector>

#include "rpnet/sparse/csr_matrix.hpp"

namespace rpnet {

/// Design matrix plus class ids. labels[i] < n_classes for every i.
/// class_values maps a class id back to the label as written on disk
/// (ascending numeric order).
struct LabeledDataset {
  CsrMatrix features;
  std::vector<std::uint32_t> labels;
  std::size_t n_classes = 0;
  std::vector<double> class_values;

  std::size_t size() const noexcept { return labels.size(); }
};

/// Reads `<label> <idx>:<val> ...` lines with 1-based strictly increasing
/// indices. Blank lines and lines starting with '#' are skipped. Labels are
/// mapped to contiguous ids in ascending numeric order.
///
/// When expected_dim is given it becomes n_cols and any larger index is a
/// FormatError; otherwise n_cols is the largest index seen.
LabeledDataset parse_libsvm(std::istream& in,
                            std::optional<std::size_t> expected_dim = {});
LabeledDataset load_libsvm(const std::filesystem::path& path,
                           std::optional<std::size_t> expected_dim = {});

/// Canonical text form: original label values, 1-based indices, shortest
/// round-trip representation of every number.
void write_libsvm(std::ostream& out, const LabeledDataset& data);
void save_libsvm(const std::filesystem::path& path,
                 const LabeledDataset& data);

/// Checks labels against n_classes and row count; throws FormatError.
void validate(const LabeledDataset& data);

/// Rows selected by index, labels carried along.
LabeledDataset subset(const LabeledDataset& data,
                      std::span<const std::size_t> rows);

}  // namespace rpnet
