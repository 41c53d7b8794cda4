// SPDX-License-Identifier: MIT

#include "rpnet/nn/activation.hpp"

#include <charconv>
#include <cmath>

#include "rpnet/error.hpp"

namespace rpnet::nn {

void Activation::validate() const {
  if (kind == ActivationKind::LReLU && !(alpha > 0.0 && alpha < 1.0)) {
    throw InvalidArgument("lrelu slope must lie in (0, 1), got " +
                          std::to_string(alpha));
  }
}

double Activation::operator()(double z) const noexcept {
  switch (kind) {
    case ActivationKind::Linear:
      return z;
    case ActivationKind::Sigmoid:
      return z >= 0.0 ? 1.0 / (1.0 + std::exp(-z))
                      : std::exp(z) / (1.0 + std::exp(z));
    case ActivationKind::Tanh:
      return std::tanh(z);
    case ActivationKind::ReLU:
      return z > 0.0 ? z : 0.0;
    case ActivationKind::LReLU:
      return z > 0.0 ? z : alpha * z;
  }
  return z;
}

double Activation::derivative_from_output(double y) const noexcept {
  switch (kind) {
    case ActivationKind::Linear:
      return 1.0;
    case ActivationKind::Sigmoid:
      return y * (1.0 - y);
    case ActivationKind::Tanh:
      return 1.0 - y * y;
    case ActivationKind::ReLU:
      return y > 0.0 ? 1.0 : 0.0;
    case ActivationKind::LReLU:
      return y > 0.0 ? 1.0 : alpha;
  }
  return 1.0;
}

std::string to_string(const Activation& a) {
  switch (a.kind) {
    case ActivationKind::Linear:
      return "linear";
    case ActivationKind::Sigmoid:
      return "sigmoid";
    case ActivationKind::Tanh:
      return "tanh";
    case ActivationKind::ReLU:
      return "relu";
    case ActivationKind::LReLU: {
      char buf[32];
      auto r = std::to_chars(buf, buf + sizeof buf, a.alpha);
      return "lrelu:" + std::string(buf, r.ptr);
    }
  }
  return "?";
}

Activation parse_activation(std::string_view s) {
  if (s == "linear") return {ActivationKind::Linear};
  if (s == "sigmoid") return {ActivationKind::Sigmoid};
  if (s == "tanh") return {ActivationKind::Tanh};
  if (s == "relu") return {ActivationKind::ReLU};
  if (s == "lrelu") return {ActivationKind::LReLU, 0.01};
  if (s.starts_with("lrelu:")) {
    Activation a{ActivationKind::LReLU, 0.0};
    const auto tail = s.substr(6);
    auto r = std::from_chars(tail.data(), tail.data() + tail.size(), a.alpha);
    if (r.ec != std::errc() || r.ptr != tail.data() + tail.size()) {
      throw InvalidArgument("bad lrelu slope in '" + std::string(s) + "'");
    }
    a.validate();
    return a;
  }
  throw InvalidArgument("unknown activation '" + std::string(s) + "'");
}

}  // namespace rpnet::nn
