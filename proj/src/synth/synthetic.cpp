// SPDX-License-Identifier: MIT

#include "rpnet/synth/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "rpnet/error.hpp"
#include "rpnet/rp/rng.hpp"
#include "rpnet/sparse/ops.hpp"

namespace rpnet::synth {
namespace {

constexpr double kFullD = 1e6;
constexpr double kFullN = 1.25e6;

std::vector<std::size_t> pick_significant(const SynthSpec& spec) {
  const std::size_t m = spec.n_significant();
  std::vector<std::size_t> ids(spec.d);
  std::iota(ids.begin(), ids.end(), 0);
  rp::RngStream rng(spec.seed, rp::streams::kSignificant);
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t j = i + rng.below(spec.d - i);
    std::swap(ids[i], ids[j]);
  }
  ids.resize(m);
  std::sort(ids.begin(), ids.end());
  return ids;
}

}  // namespace

void SynthSpec::validate() const {
  if (n_total < 2) throw InvalidArgument("synth: n_total must be >= 2");
  if (d < 1) throw InvalidArgument("synth: d must be >= 1");
  if (!(rho > 0.0 && rho < 1.0)) throw InvalidArgument("synth: rho must lie in (0, 1)");
  if (!(psi > 0.0 && psi <= 1.0)) throw InvalidArgument("synth: psi must lie in (0, 1]");
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw InvalidArgument("synth: train_fraction must lie in (0, 1)");
  }
  if (!(sep_std >= 0.0) || !std::isfinite(sep_mean)) {
    throw InvalidArgument("synth: invalid noise parameters");
  }
}

std::size_t SynthSpec::n_significant() const {
  return std::min(d, static_cast<std::size_t>(
                         std::llround(psi * static_cast<double>(d))));
}

nlohmann::json SynthSpec::to_json() const {
  return {{"n_total", n_total},   {"d", d},
          {"rho", rho},           {"psi", psi},
          {"sep_mean", sep_mean}, {"sep_std", sep_std},
          {"seed", seed},         {"train_fraction", train_fraction}};
}

SynthSpec SynthSpec::from_json(const nlohmann::json& j) {
  try {
    SynthSpec s;
    s.n_total = j.at("n_total").get<std::size_t>();
    s.d = j.at("d").get<std::size_t>();
    s.rho = j.at("rho").get<double>();
    s.psi = j.at("psi").get<double>();
    s.sep_mean = j.value("sep_mean", 1.0);
    s.sep_std = j.value("sep_std", 1.0);
    s.seed = j.value("seed", std::uint64_t{1});
    s.train_fraction = j.value("train_fraction", 0.8);
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("synth spec: ") + e.what());
  }
}

nlohmann::json SynthData::sidecar(const SynthSpec& spec) const {
  return {{"spec", spec.to_json()},
          {"n_train", train.size()},
          {"n_test", test.size()},
          {"significant_feature_ids", significant}};
}

LabeledDataset generate_all(const SynthSpec& spec,
                            std::vector<std::size_t>* significant) {
  spec.validate();
  const auto sig = pick_significant(spec);
  std::vector<char> is_sig(spec.d, 0);
  for (auto f : sig) is_sig[f] = 1;

  LabeledDataset ds;
  ds.n_classes = 2;
  ds.class_values = {-1.0, 1.0};
  ds.labels.resize(spec.n_total);
  CsrBuilder b(spec.d, static_cast<std::size_t>(
                           static_cast<double>(spec.n_total) *
                           static_cast<double>(spec.d) * spec.rho * 1.05) + 16);
  for (std::size_t i = 0; i < spec.n_total; ++i) {
    const std::uint32_t label = static_cast<std::uint32_t>(i % 2);
    ds.labels[i] = label;
    rp::RngStream base(spec.seed, 2 * i);
    rp::RngStream noise(spec.seed, 2 * i + 1);
    std::uint64_t c = base.geometric_gap(spec.rho);
    while (c < spec.d) {
      double v = base.normal();
      if (label == 1 && is_sig[c]) v += spec.sep_mean + spec.sep_std * noise.normal();
      b.push(static_cast<Index>(c), v);
      const std::uint64_t gap = base.geometric_gap(spec.rho);
      if (gap >= spec.d) break;
      c += gap + 1;
    }
    b.finish_row();
  }
  ds.features = std::move(b).build();
  if (significant) *significant = sig;
  return ds;
}

SynthData generate(const SynthSpec& spec) {
  SynthData out;
  const LabeledDataset all = generate_all(spec, &out.significant);
  if (spec.rho * static_cast<double>(spec.d) < 0.5) {
    out.warnings.push_back("synth: expected non-zeros per row (rho * d) is below 0.5");
  }
  std::vector<std::size_t> perm(spec.n_total);
  std::iota(perm.begin(), perm.end(), 0);
  rp::RngStream rng(spec.seed, rp::streams::kSplit);
  for (std::size_t i = perm.size() - 1; i > 0; --i) {
    std::swap(perm[i], perm[rng.below(i + 1)]);
  }
  const auto n_train = static_cast<std::size_t>(
      std::llround(spec.train_fraction * static_cast<double>(spec.n_total)));
  std::vector<std::size_t> train_rows(perm.begin(), perm.begin() + n_train);
  std::vector<std::size_t> test_rows(perm.begin() + n_train, perm.end());
  std::sort(train_rows.begin(), train_rows.end());
  std::sort(test_rows.begin(), test_rows.end());
  out.train = subset(all, train_rows);
  out.test = subset(all, test_rows);
  return out;
}

std::vector<SynthSpec> grid_preset(std::string_view name, std::size_t divisor) {
  if (divisor == 0) throw InvalidArgument("synth preset: divisor must be >= 1");
  std::vector<std::pair<double, double>> grid;  // (rho, psi)
  if (name == "rho_grid") {
    for (double rho : {1e-6, 3e-6, 1e-5, 3e-5, 1e-4}) grid.push_back({rho, 0.2});
  } else if (name == "psi_grid") {
    for (double psi : {0.01, 0.02, 0.05, 0.1, 0.2}) grid.push_back({1e-4, psi});
  } else {
    throw InvalidArgument("unknown synthetic preset '" + std::string(name) + "'");
  }
  const double div = static_cast<double>(divisor);
  std::vector<SynthSpec> out;
  for (auto [rho, psi] : grid) {
    SynthSpec s;
    s.d = static_cast<std::size_t>(std::llround(kFullD / div));
    s.n_total = static_cast<std::size_t>(std::llround(kFullN / div));
    s.rho = rho * div;
    s.psi = psi;
    s.validate();
    out.push_back(s);
  }
  return out;
}

}  // namespace rpnet::synth
