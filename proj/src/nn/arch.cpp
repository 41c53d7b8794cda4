// SPDX-License-Identifier: MIT

#include "rpnet/nn/arch.hpp"

#include <charconv>
#include <string>

#include "rpnet/error.hpp"
#include "rpnet/rp/rng.hpp"

namespace rpnet::nn {
namespace {

std::size_t parse_width(std::string_view tok, std::string_view whole) {
  std::size_t v = 0;
  auto r = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (tok.empty() || r.ec != std::errc() || r.ptr != tok.data() + tok.size() ||
      v == 0) {
    throw InvalidArgument("bad layer width '" + std::string(tok) +
                          "' in architecture '" + std::string(whole) + "'");
  }
  return v;
}

InitScheme default_init(const Activation& a) {
  switch (a.kind) {
    case ActivationKind::ReLU:
    case ActivationKind::LReLU:
      return {InitKind::He};
    case ActivationKind::Sigmoid:
      return {InitKind::XavierSigmoid};
    case ActivationKind::Tanh:
      return {InitKind::XavierTanh};
    case ActivationKind::Linear:
      return {InitKind::LeCun};
  }
  return {InitKind::He};
}

std::unique_ptr<DenseLayer> dense(std::size_t in, std::size_t out,
                                  const InitScheme& init, std::uint64_t seed) {
  return std::make_unique<DenseLayer>(init_weights(in, out, init, seed),
                                      std::vector<double>(out, 0.0));
}

}  // namespace

std::string ArchSpec::to_string() const {
  std::string s = input ? std::to_string(*input) : "d";
  for (std::size_t w : widths) s += "-" + std::to_string(w);
  return s;
}

ArchSpec parse_arch(std::string_view s) {
  ArchSpec a;
  std::size_t pos = 0;
  bool first = true;
  while (true) {
    const auto dash = s.find('-', pos);
    const auto tok = s.substr(pos, dash == std::string_view::npos
                                       ? std::string_view::npos
                                       : dash - pos);
    if (first) {
      if (tok != "d") a.input = parse_width(tok, s);
      first = false;
    } else {
      a.widths.push_back(parse_width(tok, s));
    }
    if (dash == std::string_view::npos) break;
    pos = dash + 1;
  }
  if (a.widths.empty()) {
    throw InvalidArgument("architecture '" + std::string(s) +
                          "' needs at least an input and an output width");
  }
  return a;
}

std::string_view to_string(RpUse r) noexcept {
  switch (r) {
    case RpUse::None:
      return "none";
    case RpUse::Fixed:
      return "fixed";
    case RpUse::Finetuned:
      return "finetuned";
  }
  return "?";
}

RpUse parse_rp_use(std::string_view s) {
  if (s == "none") return RpUse::None;
  if (s == "fixed") return RpUse::Fixed;
  if (s == "finetuned") return RpUse::Finetuned;
  throw InvalidArgument("unknown RP layer mode '" + std::string(s) + "'");
}

Model build_model(std::size_t input_dim, const ArchSpec& arch,
                  const ModelOptions& opt, std::uint64_t seed) {
  if (arch.input && *arch.input != input_dim) {
    throw DimensionMismatch("architecture input " + std::to_string(*arch.input) +
                            " but data has " + std::to_string(input_dim) +
                            " features");
  }
  if (arch.widths.empty()) throw InvalidArgument("architecture has no layers");
  opt.hidden.validate();
  const std::size_t n_out = arch.widths.back();
  const std::size_t n_hidden = arch.widths.size() - 1;
  Model model(n_out == 1 ? LossKind::BinaryCE : LossKind::SoftmaxCE, seed);
  const InitScheme init = opt.init.value_or(default_init(opt.hidden));

  std::size_t prev = input_dim;
  std::size_t next = 0;
  if (opt.rp != RpUse::None) {
    if (n_hidden == 0) {
      throw InvalidArgument("an RP layer needs a hidden width for k");
    }
    const std::size_t k = arch.widths[0];
    const std::uint64_t rp_seed = rp::derive_seed(seed, 0x7270);
    std::unique_ptr<RpLayer> layer;
    if (opt.rp == RpUse::Fixed) {
      rp::RpSchemeSpec spec;
      spec.kind = opt.rp_scheme;
      spec.d = input_dim;
      spec.k = k;
      spec.seed = rp_seed;
      const rp::RpMatrix p = rp::generate(spec);
      layer = std::make_unique<RpLayer>(
          p.is_sparse() ? p.sparse() : CsrMatrix::from_dense(p.dense()),
          RpMode::Fixed);
      layer->set_source_spec(spec);
    } else {
      InitScheme rpi{InitKind::RpInit, opt.rp_scheme, opt.cs_gamma};
      layer = std::make_unique<RpLayer>(
          rp_init_pattern(input_dim, k, rpi, rp_seed), RpMode::Finetuned, 1.0,
          rp::derive_seed(seed, rp::streams::kGate));
    }
    model.add(std::move(layer));
    if (opt.batch_norm) model.add(std::make_unique<BatchNormLayer>(k));
    prev = k;
    next = 1;
  }
  for (std::size_t i = next; i < n_hidden; ++i) {
    const std::size_t w = arch.widths[i];
    model.add(dense(prev, w, init, rp::derive_seed(seed, i)));
    if (opt.batch_norm) model.add(std::make_unique<BatchNormLayer>(w));
    model.add(std::make_unique<ActivationLayer>(w, opt.hidden));
    if (opt.dropout_keep < 1.0) {
      model.add(std::make_unique<DropoutLayer>(w, opt.dropout_keep));
    }
    prev = w;
  }
  const Activation out_act{n_out == 1 ? ActivationKind::Sigmoid
                                      : ActivationKind::Linear};
  model.add(dense(prev, n_out,
                  n_out == 1 ? InitScheme{InitKind::XavierSigmoid}
                             : InitScheme{InitKind::LeCun},
                  rp::derive_seed(seed, n_hidden)));
  if (n_out == 1) model.add(std::make_unique<ActivationLayer>(n_out, out_act));
  return model;
}

ArchSpec arch_preset(std::string_view name) {
  if (name == "wide") return parse_arch("d-1000-3000-3000-1");
  if (name == "desk") return parse_arch("d-256-256-256-1");
  if (name == "xor") return parse_arch("2-8-1");
  throw InvalidArgument("unknown architecture preset '" + std::string(name) +
                        "'");
}

}  // namespace rpnet::nn
