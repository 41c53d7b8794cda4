// SPDX-License-Identifier: MIT

#pragma once

#include <cstdint>
#include <vector>

#include "json.hpp"
#include "rpnet/sparse/csr_matrix.hpp"
#include "rpnet/sparse/dense_matrix.hpp"

namespace rpnet::projection {

enum class NormKind : std::uint8_t {
  Standardize = 1,  // per-feature zero mean, unit population variance
  MaxAbs = 2,       // per-feature division by the training max |x|
};

struct NormalizationStats {
  NormKind kind = NormKind::Standardize;
  std::vector<double> mean;     // Standardize
  std::vector<double> std;      // Standardize; 1 where variance < 1e-12
  std::vector<double> max_abs;  // MaxAbs; 0 for all-zero features

  std::size_t dim() const noexcept {
    return kind == NormKind::Standardize ? mean.size() : max_abs.size();
  }
  bool operator==(const NormalizationStats&) const = default;
};

/// Variance below this counts as constant; the divisor falls back to 1.
inline constexpr double kMinVariance = 1e-12;

NormalizationStats fit_standardize(const DenseMatrix& r);
DenseMatrix apply_standardize(const DenseMatrix& r,
                              const NormalizationStats& stats);
void apply_standardize_inplace(DenseMatrix& r, const NormalizationStats& stats);

NormalizationStats fit_maxabs(const CsrMatrix& a);
/// Scales stored entries only, so the pattern is unchanged. Features with
/// max_abs = 0 keep scale 1.
CsrMatrix apply_maxabs(const CsrMatrix& a, const NormalizationStats& stats);

nlohmann::json to_json(const NormalizationStats& stats);
NormalizationStats stats_from_json(const nlohmann::json& j);

}  // namespace rpnet::projection
