// SPDX-License-Identifier: MIT

#include "rpnet/projection/normalization.hpp"

#include <cmath>

#include "rpnet/error.hpp"

namespace rpnet::projection {

NormalizationStats fit_standardize(const DenseMatrix& r) {
  const std::size_t m = r.rows();
  const std::size_t k = r.cols();
  NormalizationStats s;
  s.kind = NormKind::Standardize;
  s.mean.assign(k, 0.0);
  s.std.assign(k, 1.0);
  if (m == 0) return s;
  for (std::size_t i = 0; i < m; ++i) {
    const auto row = r.row(i);
    for (std::size_t c = 0; c < k; ++c) s.mean[c] += row[c];
  }
  for (double& v : s.mean) v /= static_cast<double>(m);
  std::vector<double> var(k, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    const auto row = r.row(i);
    for (std::size_t c = 0; c < k; ++c) {
      const double dlt = row[c] - s.mean[c];
      var[c] += dlt * dlt;
    }
  }
  for (std::size_t c = 0; c < k; ++c) {
    const double v = var[c] / static_cast<double>(m);
    s.std[c] = v < kMinVariance ? 1.0 : std::sqrt(v);
  }
  return s;
}

void apply_standardize_inplace(DenseMatrix& r, const NormalizationStats& stats) {
  if (stats.kind != NormKind::Standardize) {
    throw InvalidArgument("apply_standardize: stats are not standardization");
  }
  if (stats.mean.size() != r.cols() || stats.std.size() != r.cols()) {
    throw DimensionMismatch("apply_standardize: stats dimension != columns");
  }
  for (std::size_t i = 0; i < r.rows(); ++i) {
    auto row = r.row(i);
    for (std::size_t c = 0; c < row.size(); ++c) {
      row[c] = (row[c] - stats.mean[c]) / stats.std[c];
    }
  }
}

DenseMatrix apply_standardize(const DenseMatrix& r,
                              const NormalizationStats& stats) {
  DenseMatrix out = r;
  apply_standardize_inplace(out, stats);
  return out;
}

NormalizationStats fit_maxabs(const CsrMatrix& a) {
  NormalizationStats s;
  s.kind = NormKind::MaxAbs;
  s.max_abs.assign(a.cols(), 0.0);
  const auto idx = a.col_indices();
  const auto val = a.values();
  for (std::size_t q = 0; q < idx.size(); ++q) {
    s.max_abs[idx[q]] = std::max(s.max_abs[idx[q]], std::abs(val[q]));
  }
  return s;
}

CsrMatrix apply_maxabs(const CsrMatrix& a, const NormalizationStats& stats) {
  if (stats.kind != NormKind::MaxAbs) {
    throw InvalidArgument("apply_maxabs: stats are not max-abs scaling");
  }
  if (stats.max_abs.size() != a.cols()) {
    throw DimensionMismatch("apply_maxabs: stats dimension != columns");
  }
  const auto off = a.row_offsets();
  const auto idx = a.col_indices();
  Buffer<double> vals(a.values().begin(), a.values().end());
  for (std::size_t q = 0; q < vals.size(); ++q) {
    const double m = stats.max_abs[idx[q]];
    if (m > 0.0) vals[q] /= m;
  }
  return CsrMatrix(a.rows(), a.cols(), Buffer<std::size_t>(off.begin(), off.end()),
                   Buffer<Index>(idx.begin(), idx.end()), std::move(vals));
}

nlohmann::json to_json(const NormalizationStats& stats) {
  nlohmann::json j;
  if (stats.kind == NormKind::Standardize) {
    j["kind"] = "standardize";
    j["mean"] = stats.mean;
    j["std"] = stats.std;
  } else {
    j["kind"] = "maxabs";
    j["max_abs"] = stats.max_abs;
  }
  return j;
}

NormalizationStats stats_from_json(const nlohmann::json& j) {
  try {
    NormalizationStats s;
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "standardize") {
      s.kind = NormKind::Standardize;
      s.mean = j.at("mean").get<std::vector<double>>();
      s.std = j.at("std").get<std::vector<double>>();
      if (s.mean.size() != s.std.size()) {
        throw FormatError("normalization stats: mean/std length differ");
      }
    } else if (kind == "maxabs") {
      s.kind = NormKind::MaxAbs;
      s.max_abs = j.at("max_abs").get<std::vector<double>>();
    } else {
      throw FormatError("normalization stats: unknown kind '" + kind + "'");
    }
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("normalization stats: ") + e.what());
  }
}

}  // namespace rpnet::projection
