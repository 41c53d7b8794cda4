// SPDX-License-Identifier: MIT

#pragma once

#include <cstdint>
#include <span>
#include <string_view>

#include "rpnet/sparse/dense_matrix.hpp"

namespace rpnet::nn {

enum class LossKind { MSE, BinaryCE, SoftmaxCE };

std::string_view to_string(LossKind k) noexcept;
LossKind parse_loss(std::string_view s);

inline constexpr double kProbClamp = 1e-12;

struct LossResult {
  /// Mean over the batch.
  double value = 0.0;
  /// d value / d pred.
  DenseMatrix grad;
};

/// MSE: 0.5 * sum_j (p - t)^2 per example. BinaryCE: pred holds
/// probabilities, clamped to [1e-12, 1 - 1e-12], targets must be 0 or 1.
/// SoftmaxCE: pred holds logits, targets are one-hot (or any distribution).
LossResult compute_loss(const DenseMatrix& pred, const DenseMatrix& target,
                        LossKind kind);

/// Gradient with respect to the pre-activation when a sigmoid output feeds
/// BinaryCE: (p - t) / m. Skips the p(1 - p) round trip, which vanishes once
/// the sigmoid saturates.
DenseMatrix sigmoid_bce_logit_grad(const DenseMatrix& prob,
                                   const DenseMatrix& target);

DenseMatrix softmax_rows(const DenseMatrix& logits);

/// Target matrix for integer labels: a 0/1 column when the network has a
/// single output, one-hot rows otherwise.
DenseMatrix make_targets(std::span<const std::uint32_t> labels,
                         std::size_t outputs);

/// Predicted label per row: output > 0.5 for a single output, arg-max
/// otherwise.
std::vector<std::uint32_t> predict_labels(const DenseMatrix& out);

}  // namespace rpnet::nn
