// SPDX-License-Identifier: MIT

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rpnet/nn/activation.hpp"
#include "rpnet/nn/init.hpp"
#include "rpnet/nn/layers.hpp"
#include "rpnet/nn/model.hpp"

namespace rpnet::nn {

/// Dash notation "d-1000-3000-3000-1": the leading token is the input
/// width, either "d" (taken from the data) or a number; the last token is
/// the output width. With an RP layer the first hidden width is its k.
struct ArchSpec {
  std::optional<std::size_t> input;
  std::vector<std::size_t> widths;

  std::string to_string() const;
};

ArchSpec parse_arch(std::string_view s);

enum class RpUse { None, Fixed, Finetuned };
std::string_view to_string(RpUse r) noexcept;
RpUse parse_rp_use(std::string_view s);

struct ModelOptions {
  RpUse rp = RpUse::None;
  rp::Scheme rp_scheme = rp::Scheme::Gaussian;
  /// Count Sketch scale of a finetuned RP layer.
  double cs_gamma = 0.3;
  Activation hidden = {ActivationKind::ReLU, 0.01};
  /// Batch norm after the RP layer and every hidden Dense layer.
  bool batch_norm = true;
  /// Dropout keep probability for hidden units; 1 disables.
  double dropout_keep = 1.0;
  /// Hidden Dense init; defaults to He for (L)ReLU, Xavier otherwise.
  std::optional<InitScheme> init;
};

/// Layer stack: [RP (+BN)] then per hidden width Dense (+BN) activation
/// (+dropout), then Dense to the output with a sigmoid (one output,
/// BinaryCE) or linear logits (SoftmaxCE). A fixed RP layer holds the raw
/// scheme matrix; a finetuned one its RpInit rescaling.
Model build_model(std::size_t input_dim, const ArchSpec& arch,
                  const ModelOptions& opt, std::uint64_t seed);

/// Named starting points: "wide" (d-1000-3000-3000-1), "desk"
/// (d-256-256-256-1), "xor" (2-8-1).
ArchSpec arch_preset(std::string_view name);

}  // namespace rpnet::nn
