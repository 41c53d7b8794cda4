// SPDX-License-Identifier: MIT

#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "rpnet/sparse/libsvm.hpp"

namespace rpnet::synth {

/// Two-class sparse dataset: a rho-dense matrix of N(0,1) values in which
/// class-1 rows get N(sep_mean, sep_std^2) added to their non-zeros inside
/// the significant features. psi is the significant fraction (written phi
/// in some texts).
struct SynthSpec {
  std::size_t n_total = 10000;
  std::size_t d = 10000;
  double rho = 1e-3;
  double psi = 0.2;
  double sep_mean = 1.0;
  double sep_std = 1.0;
  std::uint64_t seed = 1;
  double train_fraction = 0.8;

  /// Throws InvalidArgument unless 0 < rho < 1, 0 < psi <= 1,
  /// 0 < train_fraction < 1, sep_std >= 0 and n_total >= 2, d >= 1.
  void validate() const;
  std::size_t n_significant() const;

  nlohmann::json to_json() const;
  static SynthSpec from_json(const nlohmann::json& j);
};

struct SynthData {
  LabeledDataset train;
  LabeledDataset test;
  /// Sorted feature ids that carry the class signal.
  std::vector<std::size_t> significant;
  std::vector<std::string> warnings;

  /// Spec plus significant feature ids, for the sidecar file.
  nlohmann::json sidecar(const SynthSpec& spec) const;
};

/// Row i has label i % 2, so classes are balanced to within one example.
/// Row i draws its pattern and base values from stream 2i and its class
/// noise from stream 2i+1; the pattern therefore does not depend on the
/// noise parameters. The split is a seeded shuffle.
SynthData generate(const SynthSpec& spec);

/// Same rows before the split and with labels in row order; used by tests
/// and by callers that split themselves.
LabeledDataset generate_all(const SynthSpec& spec,
                            std::vector<std::size_t>* significant = nullptr);

/// "rho_grid" (psi = 0.2) or "psi_grid" (rho = 1e-4) at full scale
/// d = 1e6, n_total = 1.25e6, divided by `divisor` with rho multiplied by it
/// so the expected non-zeros per row stay the same. Throws
/// InvalidArgument for unknown names or when a scaled rho reaches 1.
std::vector<SynthSpec> grid_preset(std::string_view name,
                                    std::size_t divisor = 1);

}  // namespace rpnet::synth
