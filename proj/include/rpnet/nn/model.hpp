// SPDX-License-Identifier: MIT

#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <vector>

#include "rpnet/nn/layers.hpp"
#include "rpnet/nn/loss.hpp"

namespace rpnet::nn {

/// Snapshot of every persistent tensor, in tensors() order.
using TensorSnapshot = std::vector<std::vector<double>>;

/// A feed-forward stack of layers with a loss.
class Model {
 public:
  Model() = default;
  explicit Model(LossKind loss, std::uint64_t seed = 0)
      : loss_(loss), seed_(seed) {}

  /// Throws DimensionMismatch unless layer.in_dim() equals the current
  /// output width.
  void add(std::unique_ptr<Layer> layer);

  std::size_t size() const noexcept { return layers_.size(); }
  Layer& layer(std::size_t i) { return *layers_.at(i); }
  const Layer& layer(std::size_t i) const { return *layers_.at(i); }
  std::size_t in_dim() const;
  std::size_t out_dim() const;

  LossKind loss() const noexcept { return loss_; }
  void set_loss(LossKind k) noexcept { loss_ = k; }
  std::uint64_t seed() const noexcept { return seed_; }
  void set_seed(std::uint64_t s) noexcept { seed_ = s; }

  /// Layer 0 when it is an RP layer, else null.
  RpLayer* rp_layer() noexcept;

  /// Runs every layer. Throws NumericError naming the first layer whose
  /// output is not finite.
  DenseMatrix forward(const DenseMatrix& x, bool train, std::size_t epoch = 0,
                      std::uint64_t step = 0);
  DenseMatrix forward(const CsrMatrix& x, bool train, std::size_t epoch = 0,
                      std::uint64_t step = 0);
  /// Skips a fixed RP layer 0; r must already be (x W) with the layer's
  /// output normalization applied.
  DenseMatrix forward_projected(const DenseMatrix& r, bool train,
                                std::size_t epoch = 0, std::uint64_t step = 0);

  /// Loss of `out` (the last train-mode forward result) against `target`,
  /// then back-propagation into every layer's gradients, which are
  /// overwritten. A sigmoid output feeding BinaryCE is differentiated in
  /// one step.
  double backward(const DenseMatrix& out, const DenseMatrix& target);

  std::vector<ParamView> params();
  /// Per entry of params(): whether its layer takes the update of `step`.
  std::vector<bool> update_mask(std::uint64_t step);
  void zero_grad();

  std::vector<TensorView> tensors();
  TensorSnapshot snapshot();
  void restore(const TensorSnapshot& snap);

 private:
  DenseMatrix run_from(std::size_t first, DenseMatrix h, bool train,
                       std::size_t epoch, std::uint64_t step);

  std::vector<std::unique_ptr<Layer>> layers_;
  LossKind loss_ = LossKind::BinaryCE;
  std::uint64_t seed_ = 0;
  std::size_t first_ = 0;
};

}  // namespace rpnet::nn
