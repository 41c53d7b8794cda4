// SPDX-License-Identifier: MIT

#include "rpnet/baselines/feature_selection.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "rpnet/error.hpp"

namespace rpnet::baselines {
namespace {

struct Triple {
  Index feature;
  double value;
  std::uint32_t cls;
};

struct Category {
  double value;
  std::vector<std::size_t> counts;  // per class
  std::size_t total = 0;
};

std::size_t class_count(std::span<const std::uint32_t> y) {
  std::uint32_t m = 0;
  for (auto c : y) m = std::max(m, c);
  return y.empty() ? 0 : static_cast<std::size_t>(m) + 1;
}

std::vector<std::size_t> class_sizes(std::span<const std::uint32_t> y,
                                     std::size_t classes) {
  std::vector<std::size_t> n(classes, 0);
  for (auto c : y) ++n[c];
  return n;
}

void check_shapes(const CsrMatrix& x, std::span<const std::uint32_t> y,
                  const char* who) {
  if (x.rows() != y.size()) {
    throw DimensionMismatch(std::string(who) + ": rows != labels");
  }
}

// Calls fn(feature, categories) for every feature, categories sorted by
// value with implicit zeros merged into the value-0 category. Memory is
// O(nnz) for the triples plus one table per feature.
template <class Fn>
void for_each_table(const CsrMatrix& x, std::span<const std::uint32_t> y,
                    std::size_t classes, Fn&& fn) {
  std::vector<Triple> triples;
  triples.reserve(x.nnz());
  for (std::size_t r = 0; r < x.rows(); ++r) {
    const auto idx = x.row_indices(r);
    const auto val = x.row_values(r);
    for (std::size_t q = 0; q < idx.size(); ++q) {
      if (!std::isfinite(val[q])) {
        throw InvalidArgument("feature scoring: non-finite value");
      }
      if (val[q] != 0.0) triples.push_back({idx[q], val[q], y[r]});
    }
  }
  std::sort(triples.begin(), triples.end(), [](const Triple& a, const Triple& b) {
    if (a.feature != b.feature) return a.feature < b.feature;
    if (a.value != b.value) return a.value < b.value;
    return a.cls < b.cls;
  });
  const auto sizes = class_sizes(y, classes);
  std::vector<Category> table;
  std::size_t p = 0;
  for (std::size_t f = 0; f < x.cols(); ++f) {
    table.clear();
    Category zero{0.0, sizes, y.size()};
    while (p < triples.size() && triples[p].feature == f) {
      const double v = triples[p].value;
      Category cat{v, std::vector<std::size_t>(classes, 0), 0};
      while (p < triples.size() && triples[p].feature == f &&
             triples[p].value == v) {
        ++cat.counts[triples[p].cls];
        ++cat.total;
        --zero.counts[triples[p].cls];
        --zero.total;
        ++p;
      }
      table.push_back(std::move(cat));
    }
    if (zero.total > 0) {
      const auto pos = std::lower_bound(
          table.begin(), table.end(), 0.0,
          [](const Category& c, double v) { return c.value < v; });
      table.insert(pos, std::move(zero));
    }
    fn(f, table);
  }
}

double entropy_of(const std::vector<std::size_t>& counts, std::size_t total) {
  if (total == 0) return 0.0;
  double h = 0.0;
  for (std::size_t c : counts) {
    if (c == 0) continue;
    const double p = static_cast<double>(c) / static_cast<double>(total);
    h -= p * std::log2(p);
  }
  return h;
}

}  // namespace

std::string_view to_string(ScoreMethod m) noexcept {
  switch (m) {
    case ScoreMethod::Chi2:
      return "chi2";
    case ScoreMethod::FScore:
      return "fscore";
    case ScoreMethod::InfoGain:
      return "ig";
  }
  return "unknown";
}

ScoreMethod parse_score_method(std::string_view name) {
  for (auto m : {ScoreMethod::Chi2, ScoreMethod::FScore, ScoreMethod::InfoGain}) {
    if (name == to_string(m)) return m;
  }
  throw InvalidArgument("unknown scoring method '" + std::string(name) + "'");
}

std::string FeatureScores::to_csv() const {
  std::ostringstream out;
  out.precision(17);
  out << "feature_index,score\n";
  for (std::size_t i = 0; i < scores.size(); ++i) {
    out << i << ',' << scores[i] << '\n';
  }
  return out.str();
}

FeatureScores chi_square_scores(const CsrMatrix& x,
                                std::span<const std::uint32_t> y) {
  check_shapes(x, y, "chi_square_scores");
  FeatureScores out;
  out.method = ScoreMethod::Chi2;
  out.scores.assign(x.cols(), 0.0);
  const std::size_t classes = class_count(y);
  const auto sizes = class_sizes(y, classes);
  if (std::count_if(sizes.begin(), sizes.end(), [](auto s) { return s > 0; }) < 2) {
    out.warnings.push_back("chi2: labels contain a single class; all scores are 0");
    return out;
  }
  const double n = static_cast<double>(y.size());
  for_each_table(x, y, classes, [&](std::size_t f, const std::vector<Category>& t) {
    double chi = 0.0;
    for (const auto& cat : t) {
      for (std::size_t k = 0; k < classes; ++k) {
        const double e = static_cast<double>(cat.total) *
                         static_cast<double>(sizes[k]) / n;
        if (e == 0.0) continue;
        const double o = static_cast<double>(cat.counts[k]);
        chi += (o - e) * (o - e) / e;
      }
    }
    out.scores[f] = chi;
  });
  return out;
}

FeatureScores f_score(const CsrMatrix& x, std::span<const std::uint32_t> y) {
  check_shapes(x, y, "f_score");
  const std::size_t classes = class_count(y);
  const auto sizes = class_sizes(y, classes);
  if (std::count_if(sizes.begin(), sizes.end(), [](auto s) { return s > 0; }) < 2) {
    throw InvalidArgument("f_score: needs at least two classes");
  }
  const std::size_t d = x.cols();
  // Pass 1: per (class, feature) sums, implicit zeros included.
  std::vector<double> sum(classes * d, 0.0);
  std::vector<std::size_t> nnz(classes * d, 0);
  std::vector<double> total_sq(d, 0.0);
  for (std::size_t r = 0; r < x.rows(); ++r) {
    const auto idx = x.row_indices(r);
    const auto val = x.row_values(r);
    for (std::size_t q = 0; q < idx.size(); ++q) {
      sum[y[r] * d + idx[q]] += val[q];
      ++nnz[y[r] * d + idx[q]];
      total_sq[idx[q]] += val[q] * val[q];
    }
  }
  std::vector<double> mean(classes * d, 0.0);
  std::vector<double> overall(d, 0.0);
  for (std::size_t k = 0; k < classes; ++k) {
    for (std::size_t f = 0; f < d; ++f) {
      overall[f] += sum[k * d + f];
      if (sizes[k]) mean[k * d + f] = sum[k * d + f] / static_cast<double>(sizes[k]);
    }
  }
  for (double& m : overall) m /= static_cast<double>(y.size());
  // Pass 2: within-class squared deviations.
  std::vector<double> within(d, 0.0);
  for (std::size_t r = 0; r < x.rows(); ++r) {
    const auto idx = x.row_indices(r);
    const auto val = x.row_values(r);
    for (std::size_t q = 0; q < idx.size(); ++q) {
      const double dev = val[q] - mean[y[r] * d + idx[q]];
      within[idx[q]] += dev * dev;
    }
  }
  FeatureScores out;
  out.method = ScoreMethod::FScore;
  out.scores.assign(d, 0.0);
  for (std::size_t f = 0; f < d; ++f) {
    double num = 0.0;
    double den = within[f];
    for (std::size_t k = 0; k < classes; ++k) {
      const double mk = mean[k * d + f];
      const double zeros = static_cast<double>(sizes[k] - nnz[k * d + f]);
      den += zeros * mk * mk;
      const double dm = mk - overall[f];
      num += static_cast<double>(sizes[k]) * dm * dm;
    }
    // Rounding leaves residue of order eps * sum x^2 in both sums.
    const double tol = 1e-12 * total_sq[f];
    const bool num_zero = num <= tol;
    const bool den_zero = den <= tol;
    if (den_zero) {
      out.scores[f] = num_zero ? 0.0 : std::numeric_limits<double>::infinity();
    } else {
      out.scores[f] = num_zero ? 0.0 : num / den;
    }
  }
  return out;
}

double entropy(std::span<const std::uint32_t> labels) {
  if (labels.empty()) throw InvalidArgument("entropy: empty label set");
  const std::size_t classes = class_count(labels);
  return entropy_of(class_sizes(labels, classes), labels.size());
}

FeatureScores info_gain(const CsrMatrix& x, std::span<const std::uint32_t> y) {
  check_shapes(x, y, "info_gain");
  const double h = entropy(y);
  const std::size_t classes = class_count(y);
  const double n = static_cast<double>(y.size());
  FeatureScores out;
  out.method = ScoreMethod::InfoGain;
  out.scores.assign(x.cols(), 0.0);
  for_each_table(x, y, classes, [&](std::size_t f, const std::vector<Category>& t) {
    double cond = 0.0;
    for (const auto& cat : t) {
      cond += static_cast<double>(cat.total) / n * entropy_of(cat.counts, cat.total);
    }
    out.scores[f] = std::clamp(h - cond, 0.0, h);
  });
  return out;
}

FeatureScores score_features(ScoreMethod m, const CsrMatrix& x,
                             std::span<const std::uint32_t> y) {
  switch (m) {
    case ScoreMethod::Chi2:
      return chi_square_scores(x, y);
    case ScoreMethod::FScore:
      return f_score(x, y);
    case ScoreMethod::InfoGain:
      return info_gain(x, y);
  }
  throw InvalidArgument("unknown scoring method");
}

std::vector<std::size_t> select_k_best(std::span<const double> scores,
                                       std::size_t k) {
  if (k > scores.size()) {
    throw InvalidArgument("select_k_best: k exceeds the number of features");
  }
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  auto key = [&](std::size_t i) {
    return std::isnan(scores[i]) ? -std::numeric_limits<double>::infinity()
                                 : scores[i];
  };
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return key(a) > key(b);
  });
  order.resize(k);
  std::sort(order.begin(), order.end());
  return order;
}

}  // namespace rpnet::baselines
