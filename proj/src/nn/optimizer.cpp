// SPDX-License-Identifier: MIT

#include "rpnet/nn/optimizer.hpp"

#include <algorithm>
#include <cmath>

#include "rpnet/error.hpp"

namespace rpnet::nn {

void TrainConfig::validate() const {
  if (!(lr0 >= 0.0) || !std::isfinite(lr0)) {
    throw InvalidArgument("learning rate must be finite and >= 0");
  }
  if (!(lr_decay > 0.0 && lr_decay <= 1.0)) {
    throw InvalidArgument("lr decay must lie in (0, 1]");
  }
  if (!(momentum0 >= 0.0 && momentum0 < 1.0) ||
      !(momentum_max >= 0.0 && momentum_max < 1.0)) {
    throw InvalidArgument("momentum must lie in [0, 1)");
  }
  if (!(l2 >= 0.0)) throw InvalidArgument("l2 must be >= 0");
  if (batch_size == 0) throw InvalidArgument("batch size must be >= 1");
  if (!(eta > 0.0 && eta <= 1.0)) {
    throw InvalidArgument("eta must lie in (0, 1]");
  }
}

std::size_t TrainConfig::ramp_epochs() const {
  if (momentum_ramp_epochs > 0) return momentum_ramp_epochs;
  return std::max<std::size_t>(1, epochs / 10);
}

double TrainConfig::lr_at(std::size_t epoch) const {
  return lr0 * std::pow(lr_decay, static_cast<double>(epoch));
}

double TrainConfig::momentum_at(std::size_t epoch) const {
  const double ramp = static_cast<double>(ramp_epochs());
  const double mu = momentum0 + static_cast<double>(epoch) *
                                    (momentum_max - momentum0) / ramp;
  return momentum_max >= momentum0 ? std::min(momentum_max, mu)
                                   : std::max(momentum_max, mu);
}

nlohmann::json TrainConfig::to_json() const {
  return {{"lr0", lr0},
          {"lr_decay", lr_decay},
          {"momentum0", momentum0},
          {"momentum_max", momentum_max},
          {"momentum_ramp_epochs", ramp_epochs()},
          {"l2", l2},
          {"batch_size", batch_size},
          {"epochs", epochs},
          {"seed", seed},
          {"eta", eta},
          {"loss", std::string(to_string(loss))}};
}

TrainConfig TrainConfig::from_json(const nlohmann::json& j) {
  TrainConfig c;
  c.lr0 = j.value("lr0", c.lr0);
  c.lr_decay = j.value("lr_decay", c.lr_decay);
  c.momentum0 = j.value("momentum0", c.momentum0);
  c.momentum_max = j.value("momentum_max", c.momentum_max);
  c.momentum_ramp_epochs =
      j.value("momentum_ramp_epochs", c.momentum_ramp_epochs);
  c.l2 = j.value("l2", c.l2);
  c.batch_size = j.value("batch_size", c.batch_size);
  c.epochs = j.value("epochs", c.epochs);
  c.seed = j.value("seed", c.seed);
  c.eta = j.value("eta", c.eta);
  if (j.contains("loss")) c.loss = parse_loss(j.at("loss").get<std::string>());
  c.validate();
  return c;
}

void sgd_momentum_update(std::span<double> theta, std::span<const double> grad,
                         std::span<double> velocity, double lr, double mu,
                         double l2) {
  if (theta.size() != grad.size() || theta.size() != velocity.size()) {
    throw DimensionMismatch("sgd: parameter, gradient and velocity sizes differ");
  }
  for (std::size_t i = 0; i < theta.size(); ++i) {
    velocity[i] = mu * velocity[i] - lr * (grad[i] + l2 * theta[i]);
    theta[i] += velocity[i];
  }
}

void SgdMomentum::step(std::span<const ParamView> params,
                       const std::vector<bool>& active, double lr, double mu,
                       double l2) {
  if (active.size() != params.size()) {
    throw DimensionMismatch("sgd: update mask size differs from parameters");
  }
  if (velocity_.size() != params.size()) {
    velocity_.assign(params.size(), {});
    for (std::size_t i = 0; i < params.size(); ++i) {
      velocity_[i].assign(params[i].value.size(), 0.0);
    }
  }
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (!active[i]) continue;
    sgd_momentum_update(params[i].value, params[i].grad, velocity_[i], lr, mu,
                        params[i].decay ? l2 : 0.0);
  }
}

}  // namespace rpnet::nn
