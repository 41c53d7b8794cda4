// SPDX-License-Identifier: MIT

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "rpnet/sparse/csr_matrix.hpp"

namespace rpnet::baselines {

enum class ScoreMethod { Chi2, FScore, InfoGain };

std::string_view to_string(ScoreMethod m) noexcept;
/// Accepts chi2, fscore, ig.
ScoreMethod parse_score_method(std::string_view name);

struct FeatureScores {
  ScoreMethod method = ScoreMethod::Chi2;
  /// One entry per feature; F-score may hold +inf for features whose
  /// within-class variance is zero while the class means differ.
  std::vector<double> scores;
  std::vector<std::string> warnings;

  /// "feature_index,score" lines with a header.
  std::string to_csv() const;
};

/// Pearson chi-square of the (value x class) contingency table of every
/// feature. Values are treated as discrete categories and implicit zeros
/// form the category 0. A single-class y yields all-zero scores and a
/// warning.
FeatureScores chi_square_scores(const CsrMatrix& x,
                                std::span<const std::uint32_t> y);

/// Fisher score sum_k n_k (mu_k - mu)^2 / sum_k n_k sigma_k^2 with
/// population variances. Zero denominator: +inf if the numerator is
/// non-zero, else 0. Throws InvalidArgument for fewer than 2 classes.
FeatureScores f_score(const CsrMatrix& x, std::span<const std::uint32_t> y);

/// Base-2 Shannon entropy of the label distribution. Throws
/// InvalidArgument on empty input.
double entropy(std::span<const std::uint32_t> labels);

/// H(y) - sum_v |S_v|/|S| H(y | x = v) per feature, base 2, with the same
/// value categories as chi_square_scores.
FeatureScores info_gain(const CsrMatrix& x, std::span<const std::uint32_t> y);

FeatureScores score_features(ScoreMethod m, const CsrMatrix& x,
                             std::span<const std::uint32_t> y);

/// Indices of the k best scores in increasing index order. +inf ranks
/// above every finite score; ties go to the lower index. Throws
/// InvalidArgument if k > scores.size().
std::vector<std::size_t> select_k_best(std::span<const double> scores,
                                       std::size_t k);

}  // namespace rpnet::baselines
