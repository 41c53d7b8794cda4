// SPDX-License-Identifier: MIT

#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "rpnet/nn/activation.hpp"
#include "rpnet/nn/optimizer.hpp"
#include "rpnet/projection/normalization.hpp"
#include "rpnet/rp/schemes.hpp"
#include "rpnet/sparse/csr_matrix.hpp"
#include "rpnet/sparse/dense_matrix.hpp"

namespace rpnet::nn {

using projection::NormalizationStats;
using projection::NormKind;

enum class LayerKind { RpFixed, RpFinetuned, Dense, BatchNorm, Activation, Dropout };

std::string_view to_string(LayerKind k) noexcept;

/// Per-call state handed down by the model.
struct ForwardContext {
  bool train = false;
  std::uint64_t seed = 0;
  std::size_t layer_index = 0;
  std::size_t epoch = 0;
  /// Global mini-batch counter; keys dropout masks and the RP update gate.
  std::uint64_t step = 0;
};

/// Any persistent tensor (parameters plus running statistics).
struct TensorView {
  std::string name;
  std::span<double> data;
};

class Layer {
 public:
  virtual ~Layer() = default;

  virtual LayerKind kind() const noexcept = 0;
  virtual std::size_t in_dim() const noexcept = 0;
  virtual std::size_t out_dim() const noexcept = 0;

  virtual DenseMatrix forward(const DenseMatrix& x,
                              const ForwardContext& ctx) = 0;
  /// Sparse input; the default densifies.
  virtual DenseMatrix forward_sparse(const CsrMatrix& x,
                                     const ForwardContext& ctx);
  /// Accumulates parameter gradients and returns d loss / d input (empty
  /// when need_input_grad is false). Throws InvalidArgument without a
  /// preceding train-mode forward.
  virtual DenseMatrix backward(const DenseMatrix& grad_out,
                               bool need_input_grad) = 0;

  /// Spans stay valid for the layer's lifetime (until read_structure).
  virtual std::vector<ParamView> params() { return {}; }
  virtual std::vector<TensorView> tensors() { return {}; }
  void zero_grad();

  /// Whether this layer's parameters take the optimizer step of mini-batch
  /// `step`. Finetuned RP layers draw a Bernoulli(eta) gate here.
  virtual bool accepts_update(std::uint64_t /*step*/) { return true; }

  /// Shape and hyperparameters, enough for layer_from_json to rebuild the
  /// layer before its tensors are loaded.
  virtual nlohmann::json spec_json() const = 0;
  /// Structure that is not a tensor of doubles (RP sparsity pattern).
  virtual void write_structure(std::ostream&) const {}
  virtual void read_structure(std::istream&) {}
};

std::unique_ptr<Layer> layer_from_json(const nlohmann::json& j);

/// y = x W + b, W stored f_in x f_out.
class DenseLayer final : public Layer {
 public:
  DenseLayer(std::size_t in, std::size_t out);
  DenseLayer(DenseMatrix w, std::vector<double> b);

  LayerKind kind() const noexcept override { return LayerKind::Dense; }
  std::size_t in_dim() const noexcept override { return w_.rows(); }
  std::size_t out_dim() const noexcept override { return w_.cols(); }

  DenseMatrix forward(const DenseMatrix& x, const ForwardContext& ctx) override;
  DenseMatrix forward_sparse(const CsrMatrix& x,
                             const ForwardContext& ctx) override;
  DenseMatrix backward(const DenseMatrix& grad_out,
                       bool need_input_grad) override;
  std::vector<ParamView> params() override;
  std::vector<TensorView> tensors() override;
  nlohmann::json spec_json() const override;

  DenseMatrix& weights() noexcept { return w_; }
  std::vector<double>& bias() noexcept { return b_; }

 private:
  DenseMatrix w_, w_grad_;
  std::vector<double> b_, b_grad_;
  std::optional<DenseMatrix> x_dense_;
  std::optional<CsrMatrix> x_sparse_;
};

enum class RpMode { Fixed, Finetuned };

/// Random projection input layer. Weights live on a fixed sparsity pattern
/// (every entry for dense schemes). Fixed mode never changes them and maps
/// x -> (x W - mean) / std with optional standardization statistics.
/// Finetuned mode learns the pattern values and a bias; each mini-batch
/// update happens with probability eta, otherwise values and velocity stay
/// as they are.
class RpLayer final : public Layer {
 public:
  RpLayer(CsrMatrix pattern, RpMode mode, double eta = 1.0,
          std::uint64_t gate_seed = 0);

  LayerKind kind() const noexcept override {
    return mode_ == RpMode::Fixed ? LayerKind::RpFixed
                                  : LayerKind::RpFinetuned;
  }
  std::size_t in_dim() const noexcept override { return n_in_; }
  std::size_t out_dim() const noexcept override { return n_out_; }
  RpMode mode() const noexcept { return mode_; }
  double eta() const noexcept { return eta_; }
  /// Throws InvalidArgument unless eta lies in (0, 1].
  void set_eta(double eta);

  DenseMatrix forward(const DenseMatrix& x, const ForwardContext& ctx) override;
  DenseMatrix forward_sparse(const CsrMatrix& x,
                             const ForwardContext& ctx) override;
  DenseMatrix backward(const DenseMatrix& grad_out,
                       bool need_input_grad) override;
  std::vector<ParamView> params() override;
  std::vector<TensorView> tensors() override;
  bool accepts_update(std::uint64_t step) override;
  nlohmann::json spec_json() const override;
  void write_structure(std::ostream& out) const override;
  void read_structure(std::istream& in) override;

  /// x W without bias or normalization.
  DenseMatrix project_raw(const CsrMatrix& x) const;
  /// Current weights as a CSR matrix on the original pattern.
  CsrMatrix weights() const;
  std::span<double> values() noexcept { return values_; }
  std::span<double> bias() noexcept { return bias_; }

  /// Fixed mode: applied after the product. Pre-projected input must have
  /// had the same statistics applied.
  void set_output_normalization(std::optional<NormalizationStats> stats);
  const std::optional<NormalizationStats>& output_normalization() const {
    return norm_;
  }
  /// Scheme that generated the fixed weights, if known; lets the trainer
  /// pre-project with the out-of-core engine.
  void set_source_spec(std::optional<rp::RpSchemeSpec> spec) {
    source_ = std::move(spec);
  }
  const std::optional<rp::RpSchemeSpec>& source_spec() const {
    return source_;
  }

  std::uint64_t gate_draws() const noexcept { return gate_draws_; }
  std::uint64_t gate_accepts() const noexcept { return gate_accepts_; }

 private:

  std::size_t n_in_ = 0, n_out_ = 0;
  RpMode mode_;
  double eta_;
  std::uint64_t gate_seed_;
  std::vector<std::size_t> offsets_;
  std::vector<Index> cols_;
  std::vector<double> values_, values_grad_;
  std::vector<double> bias_, bias_grad_;
  std::optional<NormalizationStats> norm_;
  std::optional<rp::RpSchemeSpec> source_;
  std::optional<CsrMatrix> x_;
  std::uint64_t gate_draws_ = 0, gate_accepts_ = 0;
};

/// Per-dimension batch normalization, population (1/m) batch variance.
class BatchNormLayer final : public Layer {
 public:
  static constexpr double kDefaultEpsilon = 1e-5;
  static constexpr double kDefaultMomentum = 0.1;

  explicit BatchNormLayer(std::size_t dim, double epsilon = kDefaultEpsilon,
                          double momentum = kDefaultMomentum);

  LayerKind kind() const noexcept override { return LayerKind::BatchNorm; }
  std::size_t in_dim() const noexcept override { return gamma_.size(); }
  std::size_t out_dim() const noexcept override { return gamma_.size(); }

  DenseMatrix forward(const DenseMatrix& x, const ForwardContext& ctx) override;
  DenseMatrix backward(const DenseMatrix& grad_out,
                       bool need_input_grad) override;
  std::vector<ParamView> params() override;
  std::vector<TensorView> tensors() override;
  nlohmann::json spec_json() const override;

  std::vector<double>& gamma() noexcept { return gamma_; }
  std::vector<double>& beta() noexcept { return beta_; }
  const std::vector<double>& running_mean() const { return running_mean_; }
  const std::vector<double>& running_var() const { return running_var_; }
  /// x_hat of the last train-mode forward.
  const DenseMatrix& normalized() const { return xhat_; }

 private:
  double eps_, momentum_;
  std::vector<double> gamma_, beta_, gamma_grad_, beta_grad_;
  std::vector<double> running_mean_, running_var_;
  DenseMatrix xhat_;
  std::vector<double> inv_std_;
  bool cached_ = false;
};

class ActivationLayer final : public Layer {
 public:
  ActivationLayer(std::size_t dim, Activation act);

  LayerKind kind() const noexcept override { return LayerKind::Activation; }
  std::size_t in_dim() const noexcept override { return dim_; }
  std::size_t out_dim() const noexcept override { return dim_; }
  const Activation& activation() const noexcept { return act_; }

  DenseMatrix forward(const DenseMatrix& x, const ForwardContext& ctx) override;
  DenseMatrix backward(const DenseMatrix& grad_out,
                       bool need_input_grad) override;
  nlohmann::json spec_json() const override;

 private:
  std::size_t dim_;
  Activation act_;
  std::optional<DenseMatrix> y_;
};

/// Inverted dropout: in training each unit survives with probability keep
/// and is scaled by 1/keep; evaluation is the identity.
class DropoutLayer final : public Layer {
 public:
  DropoutLayer(std::size_t dim, double keep);

  LayerKind kind() const noexcept override { return LayerKind::Dropout; }
  std::size_t in_dim() const noexcept override { return dim_; }
  std::size_t out_dim() const noexcept override { return dim_; }
  double keep() const noexcept { return keep_; }

  DenseMatrix forward(const DenseMatrix& x, const ForwardContext& ctx) override;
  DenseMatrix backward(const DenseMatrix& grad_out,
                       bool need_input_grad) override;
  nlohmann::json spec_json() const override;

  /// Scale factors (0 or 1/keep) of the last train-mode forward.
  const DenseMatrix& mask() const { return mask_; }

 private:
  std::size_t dim_;
  double keep_;
  DenseMatrix mask_;
  bool cached_ = false;
};

}  // namespace rpnet::nn
