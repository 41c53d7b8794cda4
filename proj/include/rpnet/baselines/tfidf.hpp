// SPDX-License-Identifier: MIT

#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "json.hpp"
#include "rpnet/sparse/csr_matrix.hpp"

namespace rpnet::baselines {

/// Inverse document frequencies fitted on a training corpus.
struct IdfModel {
  std::size_t n_docs = 0;
  /// ln(N / df) per term; 0 for terms that never occur in training (they
  /// are treated as if df = N).
  std::vector<double> idf;

  nlohmann::json to_json() const;
  static IdfModel from_json(const nlohmann::json& j);
  bool operator==(const IdfModel&) const = default;
};

/// Throws InvalidArgument on negative counts.
IdfModel fit_idf(const CsrMatrix& counts);

/// TF = 1 + ln(1 + f) on stored entries, times IDF. Entries whose IDF is 0
/// are dropped. Columns beyond the model's vocabulary get IDF 0.
CsrMatrix apply_tfidf(const CsrMatrix& counts, const IdfModel& model);

/// Fits on `counts` unless a model is given, then applies it.
std::pair<CsrMatrix, IdfModel> tfidf_transform(const CsrMatrix& counts,
                                               const IdfModel* fitted = nullptr);

}  // namespace rpnet::baselines
