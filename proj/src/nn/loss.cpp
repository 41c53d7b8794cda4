// SPDX-License-Identifier: MIT

#include "rpnet/nn/loss.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "rpnet/error.hpp"

namespace rpnet::nn {
namespace {

void check_shapes(const DenseMatrix& pred, const DenseMatrix& target) {
  if (pred.rows() != target.rows() || pred.cols() != target.cols()) {
    throw DimensionMismatch(
        "loss: prediction is " + std::to_string(pred.rows()) + "x" +
        std::to_string(pred.cols()) + " but target is " +
        std::to_string(target.rows()) + "x" + std::to_string(target.cols()));
  }
  if (pred.rows() == 0) throw InvalidArgument("loss: empty batch");
}

void check_binary(const DenseMatrix& target) {
  for (double t : target.data()) {
    if (t != 0.0 && t != 1.0) {
      throw InvalidArgument("binary cross-entropy: target " +
                            std::to_string(t) + " is not 0 or 1");
    }
  }
}

}  // namespace

std::string_view to_string(LossKind k) noexcept {
  switch (k) {
    case LossKind::MSE:
      return "mse";
    case LossKind::BinaryCE:
      return "bce";
    case LossKind::SoftmaxCE:
      return "softmax-ce";
  }
  return "?";
}

LossKind parse_loss(std::string_view s) {
  if (s == "mse") return LossKind::MSE;
  if (s == "bce") return LossKind::BinaryCE;
  if (s == "softmax-ce") return LossKind::SoftmaxCE;
  throw InvalidArgument("unknown loss '" + std::string(s) + "'");
}

DenseMatrix softmax_rows(const DenseMatrix& logits) {
  DenseMatrix out(logits.rows(), logits.cols());
  for (std::size_t r = 0; r < logits.rows(); ++r) {
    const auto in = logits.row(r);
    auto o = out.row(r);
    const double mx = *std::max_element(in.begin(), in.end());
    double sum = 0.0;
    for (std::size_t j = 0; j < in.size(); ++j) {
      o[j] = std::exp(in[j] - mx);
      sum += o[j];
    }
    for (double& v : o) v /= sum;
  }
  return out;
}

LossResult compute_loss(const DenseMatrix& pred, const DenseMatrix& target,
                        LossKind kind) {
  check_shapes(pred, target);
  const double inv_m = 1.0 / static_cast<double>(pred.rows());
  LossResult res;
  res.grad = DenseMatrix(pred.rows(), pred.cols());
  const auto p = pred.data();
  const auto t = target.data();
  auto g = res.grad.data();
  double total = 0.0;
  switch (kind) {
    case LossKind::MSE:
      for (std::size_t i = 0; i < p.size(); ++i) {
        const double e = p[i] - t[i];
        total += 0.5 * e * e;
        g[i] = e * inv_m;
      }
      break;
    case LossKind::BinaryCE:
      check_binary(target);
      for (std::size_t i = 0; i < p.size(); ++i) {
        const double q = std::clamp(p[i], kProbClamp, 1.0 - kProbClamp);
        total -= t[i] * std::log(q) + (1.0 - t[i]) * std::log1p(-q);
        g[i] = (q - t[i]) / (q * (1.0 - q)) * inv_m;
      }
      break;
    case LossKind::SoftmaxCE: {
      const DenseMatrix s = softmax_rows(pred);
      const auto sp = s.data();
      for (std::size_t i = 0; i < p.size(); ++i) {
        if (t[i] != 0.0) {
          total -= t[i] * std::log(std::max(sp[i], kProbClamp));
        }
        g[i] = (sp[i] - t[i]) * inv_m;
      }
      break;
    }
  }
  res.value = total * inv_m;
  return res;
}

DenseMatrix sigmoid_bce_logit_grad(const DenseMatrix& prob,
                                   const DenseMatrix& target) {
  check_shapes(prob, target);
  check_binary(target);
  const double inv_m = 1.0 / static_cast<double>(prob.rows());
  DenseMatrix g(prob.rows(), prob.cols());
  for (std::size_t i = 0; i < g.size(); ++i) {
    g.data()[i] = (prob.data()[i] - target.data()[i]) * inv_m;
  }
  return g;
}

DenseMatrix make_targets(std::span<const std::uint32_t> labels,
                         std::size_t outputs) {
  if (outputs == 0) throw InvalidArgument("make_targets: zero outputs");
  DenseMatrix t(labels.size(), outputs);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const std::uint32_t y = labels[i];
    if (outputs == 1) {
      if (y > 1) {
        throw InvalidArgument("label " + std::to_string(y) +
                              " needs more than one network output");
      }
      t(i, 0) = y;
    } else {
      if (y >= outputs) {
        throw InvalidArgument("label " + std::to_string(y) +
                              " out of range for " + std::to_string(outputs) +
                              " outputs");
      }
      t(i, y) = 1.0;
    }
  }
  return t;
}

std::vector<std::uint32_t> predict_labels(const DenseMatrix& out) {
  std::vector<std::uint32_t> y(out.rows());
  for (std::size_t i = 0; i < out.rows(); ++i) {
    const auto r = out.row(i);
    if (r.size() == 1) {
      y[i] = r[0] > 0.5 ? 1 : 0;
    } else {
      y[i] = static_cast<std::uint32_t>(
          std::max_element(r.begin(), r.end()) - r.begin());
    }
  }
  return y;
}

}  // namespace rpnet::nn
