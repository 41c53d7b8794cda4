// SPDX-License-Identifier: MIT

#include "rpnet/nn/model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "rpnet/error.hpp"

namespace rpnet::nn {

void Model::add(std::unique_ptr<Layer> layer) {
  if (!layer) throw InvalidArgument("model: null layer");
  if (!layers_.empty() && layer->in_dim() != layers_.back()->out_dim()) {
    throw DimensionMismatch(
        "model: layer " + std::to_string(layers_.size()) + " (" +
        std::string(to_string(layer->kind())) + ") expects width " +
        std::to_string(layer->in_dim()) + " but the previous layer outputs " +
        std::to_string(layers_.back()->out_dim()));
  }
  const bool rp = layer->kind() == LayerKind::RpFixed ||
                  layer->kind() == LayerKind::RpFinetuned;
  if (rp && !layers_.empty()) {
    throw InvalidArgument("model: an RP layer must be the first layer");
  }
  layers_.push_back(std::move(layer));
}

std::size_t Model::in_dim() const {
  if (layers_.empty()) throw InvalidArgument("model: no layers");
  return layers_.front()->in_dim();
}

std::size_t Model::out_dim() const {
  if (layers_.empty()) throw InvalidArgument("model: no layers");
  return layers_.back()->out_dim();
}

RpLayer* Model::rp_layer() noexcept {
  if (layers_.empty()) return nullptr;
  return dynamic_cast<RpLayer*>(layers_.front().get());
}

DenseMatrix Model::run_from(std::size_t first, DenseMatrix h, bool train,
                            std::size_t epoch, std::uint64_t step) {
  for (std::size_t i = first; i < layers_.size(); ++i) {
    const ForwardContext ctx{train, seed_, i, epoch, step};
    h = layers_[i]->forward(h, ctx);
    if (!all_finite(h)) {
      throw NumericError("non-finite output at layer " + std::to_string(i) +
                         " (" + std::string(to_string(layers_[i]->kind())) +
                         ")");
    }
  }
  return h;
}

DenseMatrix Model::forward(const DenseMatrix& x, bool train, std::size_t epoch,
                           std::uint64_t step) {
  if (layers_.empty()) throw InvalidArgument("model: no layers");
  first_ = 0;
  const ForwardContext ctx{train, seed_, 0, epoch, step};
  DenseMatrix h = layers_[0]->forward(x, ctx);
  if (!all_finite(h)) {
    throw NumericError("non-finite output at layer 0 (" +
                       std::string(to_string(layers_[0]->kind())) + ")");
  }
  return run_from(1, std::move(h), train, epoch, step);
}

DenseMatrix Model::forward(const CsrMatrix& x, bool train, std::size_t epoch,
                           std::uint64_t step) {
  if (layers_.empty()) throw InvalidArgument("model: no layers");
  first_ = 0;
  const ForwardContext ctx{train, seed_, 0, epoch, step};
  DenseMatrix h = layers_[0]->forward_sparse(x, ctx);
  if (!all_finite(h)) {
    throw NumericError("non-finite output at layer 0 (" +
                       std::string(to_string(layers_[0]->kind())) + ")");
  }
  return run_from(1, std::move(h), train, epoch, step);
}

DenseMatrix Model::forward_projected(const DenseMatrix& r, bool train,
                                     std::size_t epoch, std::uint64_t step) {
  if (layers_.empty() || layers_[0]->kind() != LayerKind::RpFixed) {
    throw InvalidArgument("model: pre-projected input needs a fixed RP layer 0");
  }
  if (r.cols() != layers_[0]->out_dim()) {
    throw DimensionMismatch("model: pre-projected width " +
                            std::to_string(r.cols()) + ", expected " +
                            std::to_string(layers_[0]->out_dim()));
  }
  first_ = 1;
  return run_from(1, r, train, epoch, step);
}

double Model::backward(const DenseMatrix& out, const DenseMatrix& target) {
  if (layers_.empty()) throw InvalidArgument("model: no layers");
  const LossResult res = compute_loss(out, target, loss_);
  if (!std::isfinite(res.value)) {
    throw NumericError("non-finite loss");
  }
  std::size_t last = layers_.size();
  DenseMatrix g;
  const auto* act = dynamic_cast<const ActivationLayer*>(layers_.back().get());
  if (loss_ == LossKind::BinaryCE && act != nullptr &&
      act->activation().kind == ActivationKind::Sigmoid && last - 1 > first_) {
    g = sigmoid_bce_logit_grad(out, target);
    --last;
  } else {
    g = res.grad;
  }
  for (std::size_t i = last; i-- > first_;) {
    g = layers_[i]->backward(g, i > first_);
    if (i > first_ && !all_finite(g)) {
      throw NumericError("non-finite gradient at layer " + std::to_string(i) +
                         " (" + std::string(to_string(layers_[i]->kind())) +
                         ")");
    }
  }
  return res.value;
}

std::vector<ParamView> Model::params() {
  std::vector<ParamView> out;
  for (auto& l : layers_) {
    for (auto& p : l->params()) out.push_back(p);
  }
  return out;
}

std::vector<bool> Model::update_mask(std::uint64_t step) {
  std::vector<bool> out;
  for (auto& l : layers_) {
    const auto ps = l->params();
    if (ps.empty()) continue;
    const bool ok = l->accepts_update(step);
    out.insert(out.end(), ps.size(), ok);
  }
  return out;
}

void Model::zero_grad() {
  for (auto& l : layers_) l->zero_grad();
}

std::vector<TensorView> Model::tensors() {
  std::vector<TensorView> out;
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    for (auto& t : layers_[i]->tensors()) {
      out.push_back({std::to_string(i) + "." + t.name, t.data});
    }
  }
  return out;
}

TensorSnapshot Model::snapshot() {
  TensorSnapshot s;
  for (auto& t : tensors()) s.emplace_back(t.data.begin(), t.data.end());
  return s;
}

void Model::restore(const TensorSnapshot& snap) {
  auto ts = tensors();
  if (ts.size() != snap.size()) {
    throw DimensionMismatch("model: snapshot has " + std::to_string(snap.size()) +
                            " tensors, model has " + std::to_string(ts.size()));
  }
  for (std::size_t i = 0; i < ts.size(); ++i) {
    if (ts[i].data.size() != snap[i].size()) {
      throw DimensionMismatch("model: snapshot tensor " + ts[i].name +
                              " has the wrong size");
    }
    std::copy(snap[i].begin(), snap[i].end(), ts[i].data.begin());
  }
}

}  // namespace rpnet::nn
