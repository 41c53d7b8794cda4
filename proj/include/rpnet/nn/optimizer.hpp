// SPDX-License-Identifier: MIT

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "rpnet/nn/loss.hpp"

namespace rpnet::nn {

/// A learnable tensor exposed by a layer.
struct ParamView {
  std::string name;
  std::span<double> value;
  std::span<double> grad;
  /// L2 decay applies; true for weights only.
  bool decay = true;
};

struct TrainConfig {
  double lr0 = 0.01;
  /// Per-epoch multiplier of the learning rate.
  double lr_decay = 0.998;
  double momentum0 = 0.5;
  double momentum_max = 0.9;
  /// Epochs over which momentum ramps from momentum0 to momentum_max;
  /// 0 means 10% of `epochs` (at least 1).
  std::size_t momentum_ramp_epochs = 0;
  double l2 = 0.0;
  std::size_t batch_size = 100;
  std::size_t epochs = 10;
  std::uint64_t seed = 1;
  /// Update probability of a finetuned RP layer per mini-batch.
  double eta = 1.0;
  LossKind loss = LossKind::BinaryCE;

  void validate() const;
  double lr_at(std::size_t epoch) const;
  double momentum_at(std::size_t epoch) const;
  std::size_t ramp_epochs() const;

  nlohmann::json to_json() const;
  static TrainConfig from_json(const nlohmann::json& j);
};

/// v = mu * v - lr * (g + l2 * theta); theta += v. Pass l2 = 0 for tensors
/// that must not decay.
void sgd_momentum_update(std::span<double> theta, std::span<const double> grad,
                         std::span<double> velocity, double lr, double mu,
                         double l2);

/// Velocity buffers aligned with a fixed parameter list.
class SgdMomentum {
 public:
  /// Updates params[i] when active[i]; inactive tensors keep both their
  /// value and their velocity.
  void step(std::span<const ParamView> params, const std::vector<bool>& active,
            double lr, double mu, double l2);
  void reset() { velocity_.clear(); }
  void set_velocity(std::vector<std::vector<double>> v) {
    velocity_ = std::move(v);
  }
  const std::vector<std::vector<double>>& velocity() const noexcept {
    return velocity_;
  }

 private:
  std::vector<std::vector<double>> velocity_;
};

}  // namespace rpnet::nn
