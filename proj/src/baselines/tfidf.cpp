// SPDX-License-Identifier: MIT

#include "rpnet/baselines/tfidf.hpp"

#include <cmath>

#include "rpnet/error.hpp"

namespace rpnet::baselines {

nlohmann::json IdfModel::to_json() const {
  return {{"n_docs", n_docs}, {"idf", idf}};
}

IdfModel IdfModel::from_json(const nlohmann::json& j) {
  try {
    IdfModel m;
    m.n_docs = j.at("n_docs").get<std::size_t>();
    m.idf = j.at("idf").get<std::vector<double>>();
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("idf model: ") + e.what());
  }
}

IdfModel fit_idf(const CsrMatrix& counts) {
  std::vector<std::size_t> df(counts.cols(), 0);
  const auto idx = counts.col_indices();
  const auto val = counts.values();
  for (std::size_t q = 0; q < idx.size(); ++q) {
    if (val[q] < 0.0) throw InvalidArgument("tfidf: negative term count");
    if (val[q] > 0.0) ++df[idx[q]];
  }
  IdfModel m;
  m.n_docs = counts.rows();
  m.idf.assign(counts.cols(), 0.0);
  for (std::size_t t = 0; t < df.size(); ++t) {
    if (df[t] > 0) {
      m.idf[t] = std::log(static_cast<double>(m.n_docs) /
                          static_cast<double>(df[t]));
    }
  }
  return m;
}

CsrMatrix apply_tfidf(const CsrMatrix& counts, const IdfModel& model) {
  CsrBuilder b(counts.cols(), counts.nnz());
  for (std::size_t r = 0; r < counts.rows(); ++r) {
    const auto idx = counts.row_indices(r);
    const auto val = counts.row_values(r);
    for (std::size_t q = 0; q < idx.size(); ++q) {
      if (val[q] < 0.0) throw InvalidArgument("tfidf: negative term count");
      if (val[q] == 0.0) continue;
      const double idf = idx[q] < model.idf.size() ? model.idf[idx[q]] : 0.0;
      if (idf == 0.0) continue;
      b.push(idx[q], (1.0 + std::log1p(val[q])) * idf);
    }
    b.finish_row();
  }
  return std::move(b).build();
}

std::pair<CsrMatrix, IdfModel> tfidf_transform(const CsrMatrix& counts,
                                               const IdfModel* fitted) {
  IdfModel model = fitted ? *fitted : fit_idf(counts);
  CsrMatrix out = apply_tfidf(counts, model);
  return {std::move(out), std::move(model)};
}

}  // namespace rpnet::baselines
