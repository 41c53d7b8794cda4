// SPDX-License-Identifier: MIT

#include "rpnet/nn/layers.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <string>

#include "binary_io.hpp"
#include "rpnet/error.hpp"
#include "rpnet/rp/rng.hpp"
#include "rpnet/sparse/ops.hpp"

namespace rpnet::nn {
namespace {

void check_width(const char* who, std::size_t got, std::size_t want) {
  if (got != want) {
    throw DimensionMismatch(std::string(who) + ": input width " +
                            std::to_string(got) + ", expected " +
                            std::to_string(want));
  }
}

void check_grad(const char* who, const DenseMatrix& g, std::size_t rows,
                std::size_t cols) {
  if (g.rows() != rows || g.cols() != cols) {
    throw DimensionMismatch(std::string(who) + ": gradient is " +
                            std::to_string(g.rows()) + "x" +
                            std::to_string(g.cols()) + ", expected " +
                            std::to_string(rows) + "x" + std::to_string(cols));
  }
}

[[noreturn]] void missing_cache(const char* who) {
  throw InvalidArgument(std::string(who) +
                        ": backward called without a train-mode forward");
}

std::vector<double> column_sums(const DenseMatrix& g) {
  std::vector<double> s(g.cols(), 0.0);
  for (std::size_t r = 0; r < g.rows(); ++r) {
    const auto row = g.row(r);
    for (std::size_t j = 0; j < s.size(); ++j) s[j] += row[j];
  }
  return s;
}

nlohmann::json scheme_spec_json(const rp::RpSchemeSpec& s) {
  nlohmann::json j = {{"scheme", std::string(rp::to_string(s.kind))},
                      {"d", s.d},
                      {"k", s.k},
                      {"seed", s.seed},
                      {"srht_n_hint", s.srht_n_hint}};
  if (s.li_s) j["li_s"] = *s.li_s;
  if (s.srht_q) j["srht_q"] = *s.srht_q;
  return j;
}

rp::RpSchemeSpec scheme_spec_from_json(const nlohmann::json& j) {
  rp::RpSchemeSpec s;
  s.kind = rp::parse_scheme(j.at("scheme").get<std::string>());
  s.d = j.at("d").get<std::size_t>();
  s.k = j.at("k").get<std::size_t>();
  s.seed = j.at("seed").get<std::uint64_t>();
  s.srht_n_hint = j.value("srht_n_hint", std::size_t{0});
  if (j.contains("li_s")) s.li_s = j.at("li_s").get<double>();
  if (j.contains("srht_q")) s.srht_q = j.at("srht_q").get<double>();
  return s;
}

}  // namespace

std::string_view to_string(LayerKind k) noexcept {
  switch (k) {
    case LayerKind::RpFixed:
      return "rp_fixed";
    case LayerKind::RpFinetuned:
      return "rp_finetuned";
    case LayerKind::Dense:
      return "dense";
    case LayerKind::BatchNorm:
      return "batchnorm";
    case LayerKind::Activation:
      return "activation";
    case LayerKind::Dropout:
      return "dropout";
  }
  return "?";
}

DenseMatrix Layer::forward_sparse(const CsrMatrix& x,
                                  const ForwardContext& ctx) {
  return forward(x.to_dense(), ctx);
}

void Layer::zero_grad() {
  for (auto& p : params()) std::fill(p.grad.begin(), p.grad.end(), 0.0);
}

// ---------------------------------------------------------------- Dense

DenseLayer::DenseLayer(std::size_t in, std::size_t out)
    : w_(in, out), w_grad_(in, out), b_(out, 0.0), b_grad_(out, 0.0) {
  if (in == 0 || out == 0) throw InvalidArgument("dense: empty shape");
}

DenseLayer::DenseLayer(DenseMatrix w, std::vector<double> b)
    : w_(std::move(w)), w_grad_(w_.rows(), w_.cols()), b_(std::move(b)),
      b_grad_(b_.size(), 0.0) {
  if (w_.rows() == 0 || w_.cols() == 0) {
    throw InvalidArgument("dense: empty shape");
  }
  check_width("dense bias", b_.size(), w_.cols());
}

DenseMatrix DenseLayer::forward(const DenseMatrix& x,
                                const ForwardContext& ctx) {
  check_width("dense", x.cols(), w_.rows());
  DenseMatrix y = matmul(x, w_);
  for (std::size_t r = 0; r < y.rows(); ++r) {
    auto row = y.row(r);
    for (std::size_t j = 0; j < row.size(); ++j) row[j] += b_[j];
  }
  x_sparse_.reset();
  if (ctx.train) {
    x_dense_ = x;
  } else {
    x_dense_.reset();
  }
  return y;
}

DenseMatrix DenseLayer::forward_sparse(const CsrMatrix& x,
                                       const ForwardContext& ctx) {
  check_width("dense", x.cols(), w_.rows());
  DenseMatrix y = csr_dense_matmul(x, w_);
  for (std::size_t r = 0; r < y.rows(); ++r) {
    auto row = y.row(r);
    for (std::size_t j = 0; j < row.size(); ++j) row[j] += b_[j];
  }
  x_dense_.reset();
  if (ctx.train) {
    x_sparse_ = x;
  } else {
    x_sparse_.reset();
  }
  return y;
}

DenseMatrix DenseLayer::backward(const DenseMatrix& g, bool need_input_grad) {
  if (!x_dense_ && !x_sparse_) missing_cache("dense");
  const std::size_t m = x_dense_ ? x_dense_->rows() : x_sparse_->rows();
  check_grad("dense", g, m, w_.cols());
  // Gradients are written in place: ParamView spans must stay valid.
  if (x_dense_) {
    const DenseMatrix gw = matmul_at_b(*x_dense_, g);
    std::copy(gw.data().begin(), gw.data().end(), w_grad_.data().begin());
  } else {
    w_grad_.fill(0.0);
    const CsrMatrix& x = *x_sparse_;
    for (std::size_t r = 0; r < m; ++r) {
      const auto idx = x.row_indices(r);
      const auto val = x.row_values(r);
      const auto gr = g.row(r);
      for (std::size_t t = 0; t < idx.size(); ++t) {
        auto wr = w_grad_.row(idx[t]);
        for (std::size_t j = 0; j < gr.size(); ++j) wr[j] += val[t] * gr[j];
      }
    }
  }
  const auto gb = column_sums(g);
  std::copy(gb.begin(), gb.end(), b_grad_.begin());
  if (!need_input_grad) return {};
  return matmul_a_bt(g, w_);
}

std::vector<ParamView> DenseLayer::params() {
  return {{"weight", w_.data(), w_grad_.data(), true},
          {"bias", b_, b_grad_, false}};
}

std::vector<TensorView> DenseLayer::tensors() {
  return {{"weight", w_.data()}, {"bias", b_}};
}

nlohmann::json DenseLayer::spec_json() const {
  return {{"kind", "dense"}, {"in", w_.rows()}, {"out", w_.cols()}};
}

// ---------------------------------------------------------------- RP

RpLayer::RpLayer(CsrMatrix pattern, RpMode mode, double eta,
                 std::uint64_t gate_seed)
    : n_in_(pattern.rows()), n_out_(pattern.cols()), mode_(mode), eta_(eta),
      gate_seed_(gate_seed),
      offsets_(pattern.row_offsets().begin(), pattern.row_offsets().end()),
      cols_(pattern.col_indices().begin(), pattern.col_indices().end()),
      values_(pattern.values().begin(), pattern.values().end()),
      values_grad_(values_.size(), 0.0), bias_(n_out_, 0.0),
      bias_grad_(n_out_, 0.0) {
  if (n_in_ == 0 || n_out_ == 0) throw InvalidArgument("rp layer: empty shape");
  set_eta(eta);
}

void RpLayer::set_eta(double eta) {
  if (!(eta > 0.0 && eta <= 1.0)) {
    throw InvalidArgument("rp layer: eta must lie in (0, 1], got " +
                          std::to_string(eta));
  }
  eta_ = eta;
}

DenseMatrix RpLayer::project_raw(const CsrMatrix& x) const {
  DenseMatrix y(x.rows(), n_out_);
  for (std::size_t r = 0; r < x.rows(); ++r) {
    const auto idx = x.row_indices(r);
    const auto val = x.row_values(r);
    auto yr = y.row(r);
    for (std::size_t t = 0; t < idx.size(); ++t) {
      const double xv = val[t];
      for (std::size_t p = offsets_[idx[t]]; p < offsets_[idx[t] + 1]; ++p) {
        yr[cols_[p]] += xv * values_[p];
      }
    }
  }
  return y;
}

DenseMatrix RpLayer::forward_sparse(const CsrMatrix& x,
                                    const ForwardContext& ctx) {
  check_width("rp layer", x.cols(), n_in_);
  DenseMatrix y = project_raw(x);
  if (mode_ == RpMode::Fixed) {
    if (norm_) projection::apply_standardize_inplace(y, *norm_);
  } else {
    for (std::size_t r = 0; r < y.rows(); ++r) {
      auto row = y.row(r);
      for (std::size_t j = 0; j < n_out_; ++j) row[j] += bias_[j];
    }
  }
  if (ctx.train) {
    x_ = x;
  } else {
    x_.reset();
  }
  return y;
}

DenseMatrix RpLayer::forward(const DenseMatrix& x, const ForwardContext& ctx) {
  check_width("rp layer", x.cols(), n_in_);
  return forward_sparse(CsrMatrix::from_dense(x), ctx);
}

DenseMatrix RpLayer::backward(const DenseMatrix& grad_out,
                              bool need_input_grad) {
  if (!x_) missing_cache("rp layer");
  const CsrMatrix& x = *x_;
  check_grad("rp layer", grad_out, x.rows(), n_out_);
  DenseMatrix g = grad_out;
  if (mode_ == RpMode::Fixed) {
    if (norm_) {
      for (std::size_t r = 0; r < g.rows(); ++r) {
        auto row = g.row(r);
        for (std::size_t j = 0; j < n_out_; ++j) row[j] /= norm_->std[j];
      }
    }
  } else {
    std::fill(values_grad_.begin(), values_grad_.end(), 0.0);
    for (std::size_t r = 0; r < x.rows(); ++r) {
      const auto idx = x.row_indices(r);
      const auto val = x.row_values(r);
      const auto gr = g.row(r);
      for (std::size_t t = 0; t < idx.size(); ++t) {
        const double xv = val[t];
        for (std::size_t p = offsets_[idx[t]]; p < offsets_[idx[t] + 1]; ++p) {
          values_grad_[p] += xv * gr[cols_[p]];
        }
      }
    }
    const auto gb = column_sums(g);
    std::copy(gb.begin(), gb.end(), bias_grad_.begin());
  }
  if (!need_input_grad) return {};
  DenseMatrix dx(x.rows(), n_in_);
  for (std::size_t r = 0; r < x.rows(); ++r) {
    const auto gr = g.row(r);
    auto out = dx.row(r);
    for (std::size_t i = 0; i < n_in_; ++i) {
      double s = 0.0;
      for (std::size_t p = offsets_[i]; p < offsets_[i + 1]; ++p) {
        s += values_[p] * gr[cols_[p]];
      }
      out[i] = s;
    }
  }
  return dx;
}

std::vector<ParamView> RpLayer::params() {
  if (mode_ == RpMode::Fixed) return {};
  return {{"rp_values", values_, values_grad_, true},
          {"rp_bias", bias_, bias_grad_, false}};
}

std::vector<TensorView> RpLayer::tensors() {
  return {{"rp_values", values_}, {"rp_bias", bias_}};
}

bool RpLayer::accepts_update(std::uint64_t step) {
  if (mode_ == RpMode::Fixed) return false;
  ++gate_draws_;
  bool ok = true;
  if (eta_ < 1.0) {
    const rp::RngStream gate(gate_seed_, rp::streams::kGate);
    ok = static_cast<double>(gate.at(step) >> 11) * 0x1.0p-53 < eta_;
  }
  if (ok) ++gate_accepts_;
  return ok;
}

CsrMatrix RpLayer::weights() const {
  return CsrMatrix(n_in_, n_out_,
                   Buffer<std::size_t>(offsets_.begin(), offsets_.end()),
                   Buffer<Index>(cols_.begin(), cols_.end()),
                   Buffer<double>(values_.begin(), values_.end()));
}

void RpLayer::set_output_normalization(std::optional<NormalizationStats> s) {
  if (s) {
    if (s->kind != NormKind::Standardize || s->dim() != n_out_) {
      throw InvalidArgument(
          "rp layer: output normalization must be standardization of width " +
          std::to_string(n_out_));
    }
    if (mode_ != RpMode::Fixed) {
      throw InvalidArgument("rp layer: output normalization needs fixed mode");
    }
  }
  norm_ = std::move(s);
}

nlohmann::json RpLayer::spec_json() const {
  nlohmann::json j = {{"kind", std::string(to_string(kind()))},
                      {"in", n_in_},
                      {"out", n_out_},
                      {"eta", eta_},
                      {"gate_seed", gate_seed_}};
  if (source_) j["source"] = scheme_spec_json(*source_);
  return j;
}

void RpLayer::write_structure(std::ostream& out) const {
  bin::put<std::uint64_t>(out, offsets_.size());
  for (std::size_t o : offsets_) bin::put<std::uint64_t>(out, o);
  bin::put<std::uint64_t>(out, cols_.size());
  for (Index c : cols_) bin::put<std::uint32_t>(out, c);
  bin::put<std::uint8_t>(out, norm_ ? 1 : 0);
  if (norm_) {
    bin::put_doubles(out, norm_->mean);
    bin::put_doubles(out, norm_->std);
  }
}

void RpLayer::read_structure(std::istream& in) {
  const auto n_off = bin::get<std::uint64_t>(in);
  if (n_off != n_in_ + 1) throw FormatError("checkpoint: bad rp offsets");
  Buffer<std::size_t> off;
  off.reserve(n_off);
  for (std::uint64_t i = 0; i < n_off; ++i) {
    off.push_back(static_cast<std::size_t>(bin::get<std::uint64_t>(in)));
  }
  const auto nnz = bin::get<std::uint64_t>(in);
  if (nnz > static_cast<std::uint64_t>(n_in_) * n_out_) {
    throw FormatError("checkpoint: bad rp pattern size");
  }
  Buffer<Index> cols;
  cols.reserve(nnz);
  for (std::uint64_t i = 0; i < nnz; ++i) cols.push_back(bin::get<std::uint32_t>(in));
  // Validates the pattern through the CSR invariants.
  CsrMatrix check(n_in_, n_out_, std::move(off), std::move(cols),
                  Buffer<double>(nnz, 0.0));
  offsets_.assign(check.row_offsets().begin(), check.row_offsets().end());
  cols_.assign(check.col_indices().begin(), check.col_indices().end());
  values_.assign(nnz, 0.0);
  values_grad_.assign(nnz, 0.0);
  if (bin::get<std::uint8_t>(in) != 0) {
    NormalizationStats s;
    s.kind = NormKind::Standardize;
    s.mean = bin::get_doubles(in);
    s.std = bin::get_doubles(in);
    if (s.mean.size() != n_out_ || s.std.size() != n_out_) {
      throw FormatError("checkpoint: bad rp normalization");
    }
    norm_ = std::move(s);
  } else {
    norm_.reset();
  }
}

// ---------------------------------------------------------------- BatchNorm

BatchNormLayer::BatchNormLayer(std::size_t dim, double epsilon,
                               double momentum)
    : eps_(epsilon), momentum_(momentum), gamma_(dim, 1.0), beta_(dim, 0.0),
      gamma_grad_(dim, 0.0), beta_grad_(dim, 0.0), running_mean_(dim, 0.0),
      running_var_(dim, 1.0) {
  if (dim == 0) throw InvalidArgument("batchnorm: empty width");
  if (!(epsilon > 0.0)) throw InvalidArgument("batchnorm: epsilon must be > 0");
  if (!(momentum > 0.0 && momentum <= 1.0)) {
    throw InvalidArgument("batchnorm: momentum must lie in (0, 1]");
  }
}

DenseMatrix BatchNormLayer::forward(const DenseMatrix& x,
                                    const ForwardContext& ctx) {
  const std::size_t k = gamma_.size();
  check_width("batchnorm", x.cols(), k);
  const std::size_t m = x.rows();
  DenseMatrix y(m, k);
  if (!ctx.train) {
    cached_ = false;
    for (std::size_t r = 0; r < m; ++r) {
      const auto xr = x.row(r);
      auto yr = y.row(r);
      for (std::size_t j = 0; j < k; ++j) {
        yr[j] = gamma_[j] * (xr[j] - running_mean_[j]) /
                    std::sqrt(running_var_[j] + eps_) +
                beta_[j];
      }
    }
    return y;
  }
  if (m < 2) {
    throw InvalidArgument("batchnorm: train mode needs a batch of at least 2, got " +
                          std::to_string(m));
  }
  std::vector<double> mean(k, 0.0), var(k, 0.0);
  for (std::size_t r = 0; r < m; ++r) {
    const auto xr = x.row(r);
    for (std::size_t j = 0; j < k; ++j) mean[j] += xr[j];
  }
  const double inv_m = 1.0 / static_cast<double>(m);
  for (double& v : mean) v *= inv_m;
  for (std::size_t r = 0; r < m; ++r) {
    const auto xr = x.row(r);
    for (std::size_t j = 0; j < k; ++j) {
      const double d = xr[j] - mean[j];
      var[j] += d * d;
    }
  }
  inv_std_.resize(k);
  for (std::size_t j = 0; j < k; ++j) {
    var[j] *= inv_m;
    inv_std_[j] = 1.0 / std::sqrt(var[j] + eps_);
    running_mean_[j] = (1.0 - momentum_) * running_mean_[j] + momentum_ * mean[j];
    running_var_[j] = (1.0 - momentum_) * running_var_[j] + momentum_ * var[j];
  }
  xhat_ = DenseMatrix(m, k);
  for (std::size_t r = 0; r < m; ++r) {
    const auto xr = x.row(r);
    auto hr = xhat_.row(r);
    auto yr = y.row(r);
    for (std::size_t j = 0; j < k; ++j) {
      hr[j] = (xr[j] - mean[j]) * inv_std_[j];
      yr[j] = gamma_[j] * hr[j] + beta_[j];
    }
  }
  cached_ = true;
  return y;
}

DenseMatrix BatchNormLayer::backward(const DenseMatrix& g,
                                     bool need_input_grad) {
  if (!cached_) missing_cache("batchnorm");
  const std::size_t m = xhat_.rows();
  const std::size_t k = gamma_.size();
  check_grad("batchnorm", g, m, k);
  std::fill(gamma_grad_.begin(), gamma_grad_.end(), 0.0);
  std::fill(beta_grad_.begin(), beta_grad_.end(), 0.0);
  for (std::size_t r = 0; r < m; ++r) {
    const auto gr = g.row(r);
    const auto hr = xhat_.row(r);
    for (std::size_t j = 0; j < k; ++j) {
      gamma_grad_[j] += gr[j] * hr[j];
      beta_grad_[j] += gr[j];
    }
  }
  if (!need_input_grad) return {};
  const double md = static_cast<double>(m);
  DenseMatrix dx(m, k);
  for (std::size_t r = 0; r < m; ++r) {
    const auto gr = g.row(r);
    const auto hr = xhat_.row(r);
    auto out = dx.row(r);
    for (std::size_t j = 0; j < k; ++j) {
      out[j] = gamma_[j] * inv_std_[j] / md *
               (md * gr[j] - beta_grad_[j] - hr[j] * gamma_grad_[j]);
    }
  }
  return dx;
}

std::vector<ParamView> BatchNormLayer::params() {
  return {{"gamma", gamma_, gamma_grad_, false},
          {"beta", beta_, beta_grad_, false}};
}

std::vector<TensorView> BatchNormLayer::tensors() {
  return {{"gamma", gamma_},
          {"beta", beta_},
          {"running_mean", running_mean_},
          {"running_var", running_var_}};
}

nlohmann::json BatchNormLayer::spec_json() const {
  return {{"kind", "batchnorm"},
          {"in", gamma_.size()},
          {"out", gamma_.size()},
          {"epsilon", eps_},
          {"momentum", momentum_}};
}

// ---------------------------------------------------------------- Activation

ActivationLayer::ActivationLayer(std::size_t dim, Activation act)
    : dim_(dim), act_(act) {
  if (dim == 0) throw InvalidArgument("activation: empty width");
  act_.validate();
}

DenseMatrix ActivationLayer::forward(const DenseMatrix& x,
                                     const ForwardContext& ctx) {
  check_width("activation", x.cols(), dim_);
  DenseMatrix y(x.rows(), x.cols());
  const auto in = x.data();
  auto out = y.data();
  for (std::size_t i = 0; i < in.size(); ++i) out[i] = act_(in[i]);
  if (ctx.train) {
    y_ = y;
  } else {
    y_.reset();
  }
  return y;
}

DenseMatrix ActivationLayer::backward(const DenseMatrix& g,
                                      bool need_input_grad) {
  if (!y_) missing_cache("activation");
  check_grad("activation", g, y_->rows(), dim_);
  if (!need_input_grad) return {};
  DenseMatrix dx(g.rows(), g.cols());
  const auto y = y_->data();
  const auto gi = g.data();
  auto out = dx.data();
  for (std::size_t i = 0; i < gi.size(); ++i) {
    out[i] = gi[i] * act_.derivative_from_output(y[i]);
  }
  return dx;
}

nlohmann::json ActivationLayer::spec_json() const {
  return {{"kind", "activation"},
          {"in", dim_},
          {"out", dim_},
          {"activation", to_string(act_)}};
}

// ---------------------------------------------------------------- Dropout

DropoutLayer::DropoutLayer(std::size_t dim, double keep)
    : dim_(dim), keep_(keep) {
  if (dim == 0) throw InvalidArgument("dropout: empty width");
  if (!(keep > 0.0 && keep <= 1.0)) {
    throw InvalidArgument("dropout: keep probability must lie in (0, 1], got " +
                          std::to_string(keep));
  }
}

DenseMatrix DropoutLayer::forward(const DenseMatrix& x,
                                  const ForwardContext& ctx) {
  check_width("dropout", x.cols(), dim_);
  if (!ctx.train || keep_ == 1.0) {
    cached_ = ctx.train;
    mask_ = DenseMatrix();
    return x;
  }
  rp::RngStream s(rp::derive_seed(ctx.seed, 0x5d0000 + ctx.layer_index),
                  ctx.step);
  mask_ = DenseMatrix(x.rows(), x.cols());
  DenseMatrix y(x.rows(), x.cols());
  const double scale = 1.0 / keep_;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double m = s.uniform() < keep_ ? scale : 0.0;
    mask_.data()[i] = m;
    y.data()[i] = x.data()[i] * m;
  }
  cached_ = true;
  return y;
}

DenseMatrix DropoutLayer::backward(const DenseMatrix& g,
                                   bool need_input_grad) {
  if (!cached_) missing_cache("dropout");
  if (!need_input_grad) return {};
  if (mask_.empty()) return g;
  check_grad("dropout", g, mask_.rows(), dim_);
  DenseMatrix dx(g.rows(), g.cols());
  for (std::size_t i = 0; i < g.size(); ++i) {
    dx.data()[i] = g.data()[i] * mask_.data()[i];
  }
  return dx;
}

nlohmann::json DropoutLayer::spec_json() const {
  return {{"kind", "dropout"}, {"in", dim_}, {"out", dim_}, {"keep", keep_}};
}

// ---------------------------------------------------------------- factory

std::unique_ptr<Layer> layer_from_json(const nlohmann::json& j) {
  try {
    const std::string kind = j.at("kind").get<std::string>();
    const auto in = j.at("in").get<std::size_t>();
    const auto out = j.at("out").get<std::size_t>();
    if (kind == "dense") return std::make_unique<DenseLayer>(in, out);
    if (kind == "rp_fixed" || kind == "rp_finetuned") {
      auto l = std::make_unique<RpLayer>(
          CsrMatrix(in, out),
          kind == "rp_fixed" ? RpMode::Fixed : RpMode::Finetuned,
          j.at("eta").get<double>(), j.at("gate_seed").get<std::uint64_t>());
      if (j.contains("source")) {
        l->set_source_spec(scheme_spec_from_json(j.at("source")));
      }
      return l;
    }
    if (kind == "batchnorm") {
      return std::make_unique<BatchNormLayer>(in, j.at("epsilon").get<double>(),
                                              j.at("momentum").get<double>());
    }
    if (kind == "activation") {
      return std::make_unique<ActivationLayer>(
          in, parse_activation(j.at("activation").get<std::string>()));
    }
    if (kind == "dropout") {
      return std::make_unique<DropoutLayer>(in, j.at("keep").get<double>());
    }
    throw FormatError("unknown layer kind '" + kind + "'");
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("layer spec: ") + e.what());
  } catch (const InvalidArgument& e) {
    throw FormatError(std::string("layer spec: ") + e.what());
  }
}

}  // namespace rpnet::nn
