// SPDX-License-Identifier: MIT

#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "json.hpp"
#include "rpnet/rp/schemes.hpp"
#include "rpnet/sparse/csr_matrix.hpp"
#include "rpnet/sparse/dense_matrix.hpp"

namespace rpnet::metrics {

/// Pairwise distortion |‖f(a)−f(b)‖ / ‖a−b‖ − 1| summary.
struct DistortionReport {
  static constexpr double kBucketWidth = 0.05;
  static constexpr std::size_t kBuckets = 20;  // plus one overflow bucket

  std::size_t n_pairs = 0;
  /// Pairs with ‖a−b‖ < 1e-12 that were left out.
  std::size_t skipped = 0;
  bool exhaustive = false;
  double max_distortion = 0.0;
  double mean_distortion = 0.0;
  /// histogram[b] counts distortions in [b, b+1) * kBucketWidth; the last
  /// entry collects everything >= kBuckets * kBucketWidth.
  std::vector<std::size_t> histogram = std::vector<std::size_t>(kBuckets + 1, 0);

  nlohmann::json to_json() const;
};

/// Rows of `a` are the original points, rows of `r` their images. Every
/// pair is visited when n(n-1)/2 <= max_pairs; otherwise max_pairs pairs
/// are drawn uniformly (with replacement) from the seeded stream.
/// Throws InvalidArgument for fewer than 2 rows or mismatched row counts.
DistortionReport pairwise_distortion(const CsrMatrix& a, const DenseMatrix& r,
                                     std::size_t max_pairs,
                                     std::uint64_t seed = 0);
DistortionReport pairwise_distortion(const DenseMatrix& a, const DenseMatrix& r,
                                     std::size_t max_pairs,
                                     std::uint64_t seed = 0);

/// Monte-Carlo estimate of the subspace-embedding distortion of S for A:
/// max over `trials` Gaussian-normalized x of |‖xᵀAS‖² / ‖xᵀA‖² − 1|.
/// Trial t draws from its own stream, so more trials never lower the
/// result. Throws InvalidArgument when A has no non-zero entry or trials
/// is 0.
double subspace_distortion_mc(const CsrMatrix& a, const rp::RpMatrix& s,
                              std::size_t trials, std::uint64_t seed);
double subspace_distortion_mc(const DenseMatrix& a, const rp::RpMatrix& s,
                              std::size_t trials, std::uint64_t seed);

}  // namespace rpnet::metrics
