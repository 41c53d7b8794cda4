// SPDX-License-Identifier: MIT

#pragma once

#include <string>
#include <string_view>

namespace rpnet::nn {

enum class ActivationKind { Linear, Sigmoid, Tanh, ReLU, LReLU };

struct Activation {
  ActivationKind kind = ActivationKind::ReLU;
  /// Negative-side slope, LReLU only; must lie in (0, 1).
  double alpha = 0.01;

  void validate() const;
  double operator()(double z) const noexcept;
  /// d phi / d z expressed through the output y = phi(z). Valid for every
  /// kind because ReLU and LReLU keep the sign of z.
  double derivative_from_output(double y) const noexcept;

  bool operator==(const Activation&) const = default;
};

/// "linear", "sigmoid", "tanh", "relu", "lrelu" or "lrelu:<alpha>".
std::string to_string(const Activation& a);
Activation parse_activation(std::string_view s);

}  // namespace rpnet::nn
