// SPDX-License-Identifier: MIT

// Acceptance run: one PASS/FAIL line per criterion, non-zero exit when any
// criterion fails. Oracles here are written independently of the library.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "nn_oracles.hpp"
#include "rpnet/baselines/feature_selection.hpp"
#include "rpnet/metrics/bench.hpp"
#include "rpnet/nn/arch.hpp"
#include "rpnet/nn/trainer.hpp"
#include "rpnet/projection/engine.hpp"
#include "rpnet/rp/schemes.hpp"
#include "rpnet/sparse/ops.hpp"
#include "rpnet/synth/synthetic.hpp"
#include "test_util.hpp"

using namespace rpnet;
using testing::random_csr;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  const char* name;
  double limit_seconds;
  std::function<Outcome()> run;
};

std::string fmt(const char* f, double a, double b = 0, double c = 0,
                double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

rp::RpSchemeSpec spec_of(rp::Scheme kind, std::size_t d, std::size_t k,
                         std::uint64_t seed) {
  rp::RpSchemeSpec s;
  s.kind = kind;
  s.d = d;
  s.k = k;
  s.seed = seed;
  return s;
}

// ---------------------------------------------------------------- 1

std::vector<double> squared_distances(const DenseMatrix& x) {
  std::vector<double> out;
  for (std::size_t i = 0; i < x.rows(); ++i) {
    for (std::size_t j = i + 1; j < x.rows(); ++j) {
      double s = 0;
      for (std::size_t c = 0; c < x.cols(); ++c) {
        const double t = x(i, c) - x(j, c);
        s += t * t;
      }
      out.push_back(s);
    }
  }
  return out;
}

double max_distortion(const std::vector<double>& orig, const DenseMatrix& r) {
  const auto proj = squared_distances(r);
  double worst = 0;
  for (std::size_t p = 0; p < orig.size(); ++p) {
    if (orig[p] < 1e-24) continue;
    worst = std::max(worst, std::abs(std::sqrt(proj[p] / orig[p]) - 1.0));
  }
  return worst;
}

Outcome jl_distortion() {
  constexpr int kSeeds = 20;
  std::vector<std::vector<double>> by_k(4);
  const std::size_t ks[] = {64, 128, 256, 512};
  int within = 0;
  for (int seed = 0; seed < kSeeds; ++seed) {
    std::mt19937_64 rng(1000 + seed);
    const CsrMatrix a = random_csr(100, 2000, 0.05, rng);
    const auto orig = squared_distances(a.to_dense());
    const DenseMatrix r500 = projection::multiply(
        a, rp::generate(spec_of(rp::Scheme::Gaussian, 2000, 500, seed)));
    within += max_distortion(orig, r500) <= 0.27;
    for (std::size_t i = 0; i < 4; ++i) {
      const DenseMatrix r = projection::multiply(
          a, rp::generate(spec_of(rp::Scheme::Gaussian, 2000, ks[i], seed)));
      by_k[i].push_back(max_distortion(orig, r));
    }
  }
  bool decreasing = true;
  std::ostringstream d;
  d << within << "/" << kSeeds << " seeds <= 0.27 at k=500; median max by k:";
  for (std::size_t i = 0; i < 4; ++i) {
    const double m = median(by_k[i]);
    d << " " << ks[i] << ":" << fmt("%.3f", m);
    if (i > 0) decreasing = decreasing && m < median(by_k[i - 1]);
  }
  return {within >= 19 && decreasing, d.str()};
}

// ---------------------------------------------------------------- 2

Outcome smmp_equivalence() {
  std::mt19937_64 rng(2);
  std::uniform_int_distribution<std::size_t> dim(1, 64);
  std::uniform_real_distribution<double> dens(0.02, 0.6);
  double worst = 0;
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = dim(rng), d = dim(rng), k = dim(rng);
    const CsrMatrix a = random_csr(n, d, dens(rng), rng);
    const CsrMatrix p = random_csr(d, k, dens(rng), rng);
    const DenseMatrix got = csr_csr_matmul(a, p).to_dense();
    const DenseMatrix ref = testing::schoolbook_matmul(a.to_dense(), p.to_dense());
    if (got.rows() != n || got.cols() != k) return {false, "shape mismatch"};
    for (std::size_t i = 0; i < got.size(); ++i) {
      worst = std::max(worst, std::abs(got.data()[i] - ref.data()[i]));
    }
  }
  return {worst <= 1e-12, fmt("max |diff| %.2e over 100 instances", worst)};
}

// ---------------------------------------------------------------- 3

Outcome count_sketch_streaming() {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<std::size_t> nd(1, 200), dd(1, 3000),
      kd(1, 300);
  int equal = 0;
  for (int t = 0; t < 20; ++t) {
    const std::size_t n = nd(rng), d = dd(rng), k = kd(rng);
    const CsrMatrix a = random_csr(n, d, 0.02, rng);
    const auto spec = spec_of(rp::Scheme::CountSketch, d, k, 77 + t);
    const DenseMatrix stream = rp::apply_count_sketch_streaming(a, k, spec.seed);
    // Explicit P as a dense matrix, multiplied entry by entry.
    const DenseMatrix p = rp::generate(spec).to_dense();
    DenseMatrix ref(n, k);
    for (std::size_t r = 0; r < n; ++r) {
      const auto idx = a.row_indices(r);
      const auto val = a.row_values(r);
      for (std::size_t e = 0; e < idx.size(); ++e) {
        for (std::size_t c = 0; c < k; ++c) {
          if (p(idx[e], c) != 0.0) ref(r, c) += val[e] * p(idx[e], c);
        }
      }
    }
    equal += stream == ref;
  }
  return {equal == 20, std::to_string(equal) + "/20 bit-identical"};
}

// ---------------------------------------------------------------- 4

Outcome blocked_projection() {
  std::mt19937_64 rng(4);
  const CsrMatrix a = random_csr(150, 400, 0.04, rng);
  std::uniform_int_distribution<std::size_t> hs(1, 150), vs(1, 32);
  const rp::Scheme kinds[] = {rp::Scheme::Gaussian, rp::Scheme::Achlioptas,
                              rp::Scheme::Li, rp::Scheme::Srht,
                              rp::Scheme::CountSketch};
  double worst = 0;
  for (int t = 0; t < 50; ++t) {
    projection::ProjectionPlan base;
    base.spec = spec_of(kinds[t % 5], 400, 32, 40 + t);
    const DenseMatrix ref = projection::project(a, base);
    projection::ProjectionPlan plan = base;
    plan.h = hs(rng);
    plan.v = vs(rng);
    worst = std::max(worst, relative_frobenius_distance(
                                projection::project(a, plan), ref));
  }
  const auto spec = spec_of(rp::Scheme::Gaussian, 400, 32, 9);
  const std::size_t budget = projection::slice_triple_bytes(a, spec, 1, 1) / 4;
  projection::ProjectionPlan plan;
  plan.spec = spec;
  plan.memory_budget = budget;
  std::tie(plan.h, plan.v) = projection::suggest_slicing(a, spec, budget);
  projection::ProjectionReport rep;
  const DenseMatrix spilled = projection::project(a, plan, &rep);
  projection::ProjectionPlan whole;
  whole.spec = spec;
  const double spill_err =
      relative_frobenius_distance(spilled, projection::project(a, whole));
  return {worst <= 1e-10 && rep.spilled && spill_err <= 1e-10,
          fmt("worst rel. Frobenius %.1e; budgeted run spilled=%.0f err %.1e",
              worst, rep.spilled ? 1 : 0, spill_err)};
}

// ---------------------------------------------------------------- 5

Outcome complexity_trends() {
  metrics::BenchConfig cfg;
  cfg.d = 100000;
  cfg.density = 1e-4;
  cfg.n = 10000;
  cfg.k_list = {100, 1000};
  cfg.schemes = {rp::Scheme::Gaussian, rp::Scheme::CountSketch};
  cfg.repeats = 5;
  const auto rep = metrics::bench_schemes(cfg);
  auto ratio = [&](rp::Scheme s, bool gen) {
    const auto& lo = rep.at(s, 100);
    const auto& hi = rep.at(s, 1000);
    return gen ? hi.gen_time / lo.gen_time : hi.proj_time / lo.proj_time;
  };
  const double cs_proj = ratio(rp::Scheme::CountSketch, false);
  const double g_proj = ratio(rp::Scheme::Gaussian, false);
  const double cs_gen = ratio(rp::Scheme::CountSketch, true);
  return {cs_proj <= 1.5 && g_proj >= 5.0 && cs_gen <= 1.5,
          fmt("time ratios k=1000/k=100: countsketch proj %.2f, gaussian proj "
              "%.1f, countsketch gen %.2f",
              cs_proj, g_proj, cs_gen)};
}

// ---------------------------------------------------------------- 6

Outcome gradient_correctness() {
  double worst = 0;
  std::size_t tensors = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    nn::Model m = testing::gradcheck_model(seed);
    const auto [x, t] = testing::gradcheck_batch(seed);
    const auto r = testing::gradient_check(m, x, t);
    worst = std::max(worst, r.max_rel_error);
    tensors = r.tensors;
  }
  return {worst <= 1e-4,
          fmt("max relative error %.2e over %.0f tensors x 20 seeds", worst,
              static_cast<double>(tensors))};
}

// ---------------------------------------------------------------- 7

// Sparse two-class data; class 1 shifts the first quarter of the features.
nn::Dataset shifted_sparse(std::size_t n, std::size_t d, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const CsrMatrix base = random_csr(n, d, 0.1, rng);
  CsrBuilder b(d);
  nn::Dataset out;
  for (std::size_t r = 0; r < n; ++r) {
    const std::uint32_t y = r % 2;
    const auto idx = base.row_indices(r);
    const auto val = base.row_values(r);
    for (std::size_t t = 0; t < idx.size(); ++t) {
      b.push(idx[t], val[t] + (y == 1 && idx[t] < d / 4 ? 1.0 : 0.0));
    }
    b.finish_row();
    out.labels.push_back(y);
  }
  out.x = std::move(b).build();
  return out;
}

std::vector<std::size_t> pattern_of(const CsrMatrix& m) {
  std::vector<std::size_t> p(m.row_offsets().begin(), m.row_offsets().end());
  p.insert(p.end(), m.col_indices().begin(), m.col_indices().end());
  return p;
}

Outcome rp_layer_contracts() {
  const nn::Dataset data = shifted_sparse(400, 80, 7);

  nn::ModelOptions fixed_opt;
  fixed_opt.rp = nn::RpUse::Fixed;
  fixed_opt.rp_scheme = rp::Scheme::Gaussian;
  nn::Model fixed = nn::build_model(80, nn::parse_arch("d-16-8-1"), fixed_opt, 3);
  const CsrMatrix w0 = fixed.rp_layer()->weights();
  nn::TrainConfig cfg;
  cfg.epochs = 50;
  cfg.batch_size = 40;
  int changed_epochs = 0;
  nn::Trainer(fixed, cfg).run(data, data, nullptr, [&](const nn::Trainer& t) {
    changed_epochs += !(t.model().rp_layer()->weights() == w0);
  });

  nn::ModelOptions ft_opt;
  ft_opt.rp = nn::RpUse::Finetuned;
  ft_opt.rp_scheme = rp::Scheme::CountSketch;
  nn::Model ft = nn::build_model(80, nn::parse_arch("d-16-8-1"), ft_opt, 4);
  const CsrMatrix f0 = ft.rp_layer()->weights();
  nn::TrainConfig ft_cfg = cfg;
  ft_cfg.epochs = 20;
  nn::Trainer(ft, ft_cfg).run(data, data, nullptr);
  const CsrMatrix f1 = ft.rp_layer()->weights();
  const bool same_pattern = pattern_of(f0) == pattern_of(f1);
  const bool values_moved = !std::equal(f0.values().begin(), f0.values().end(),
                                        f1.values().begin(), f1.values().end());

  // 10^4 batches with eta = 0.5: 100 epochs of 100 batches.
  nn::Model gated = nn::build_model(80, nn::parse_arch("d-8-1"), ft_opt, 5);
  nn::TrainConfig g_cfg;
  g_cfg.epochs = 100;
  g_cfg.batch_size = 4;
  g_cfg.eta = 0.5;
  const nn::Dataset small = shifted_sparse(400, 80, 8);
  nn::Trainer(gated, g_cfg).run(small, small, nullptr);
  const std::size_t batches = gated.rp_layer()->gate_draws();
  const std::size_t updates = gated.rp_layer()->gate_accepts();
  const double sigma = std::sqrt(static_cast<double>(batches) * 0.25);
  const double dev = std::abs(static_cast<double>(updates) - 0.5 * batches);
  const bool gate_ok = batches == 10000 && dev <= 3 * sigma;
  std::ostringstream d;
  d << "fixed weights changed in " << changed_epochs
    << "/50 epochs; finetuned pattern kept: " << (same_pattern ? "yes" : "no")
    << ", values moved: " << (values_moved ? "yes" : "no") << "; eta=0.5 "
    << updates << " updates in " << batches << " batches"
    << fmt(" (%.2f sigma)", dev / sigma);
  return {changed_epochs == 0 && same_pattern && values_moved && gate_ok,
          d.str()};
}

// ---------------------------------------------------------------- 8, 9

synth::SynthData desk_fixture() {
  // d = 1e4 with rho scaled up 100x from 1e-4, so rows keep the expected
  // non-zero count of the d = 1e6 setting.
  synth::SynthSpec s;
  s.d = 10000;
  s.n_total = 20000;
  s.rho = 1e-2;
  s.psi = 0.2;
  s.seed = 1;
  return synth::generate(s);
}

double early_stop_error(const synth::SynthData& data, std::size_t k,
                        nn::RpUse use, rp::Scheme scheme, std::uint64_t seed) {
  const nn::Dataset full = nn::Dataset::from_labeled(data.train);
  nn::Dataset test = nn::Dataset::from_labeled(data.test);
  const auto [tr_idx, va_idx] = nn::split_indices(full.size(), 0.1, seed);
  nn::Dataset tr = nn::subset(full, tr_idx);
  nn::Dataset va = nn::subset(full, va_idx);

  nn::ModelOptions opt;
  opt.rp = use;
  opt.rp_scheme = scheme;
  opt.dropout_keep = 0.8;
  nn::ArchSpec arch;
  arch.widths = {k, 256, 256, 1};
  nn::Model m = nn::build_model(data.train.features.cols(), arch, opt, seed);
  if (use == nn::RpUse::Fixed) {
    nn::Dataset* others[] = {&va, &test};
    nn::preproject_fixed(m, tr, others);
  }
  nn::TrainConfig cfg;
  cfg.lr0 = 0.01;
  cfg.epochs = 15;
  cfg.batch_size = 100;
  cfg.seed = seed;
  const nn::TrainHistory h = nn::Trainer(m, cfg).run(tr, va, &test);
  return h.early_stop_test_error.value_or(1.0);
}

Outcome learning_trend(const synth::SynthData& data) {
  std::vector<double> e16, e256;
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    e16.push_back(early_stop_error(data, 16, nn::RpUse::Fixed,
                                   rp::Scheme::Gaussian, seed));
    e256.push_back(early_stop_error(data, 256, nn::RpUse::Fixed,
                                    rp::Scheme::Gaussian, seed));
  }
  const double m16 = median(e16), m256 = median(e256);
  return {m256 < 0.25 && m256 < m16,
          fmt("median early-stop test error k=256 %.4f, k=16 %.4f", m256, m16)};
}

Outcome finetuning_benefit(const synth::SynthData& data) {
  int wins = 0;
  std::ostringstream d;
  d << "count sketch k=256 fixed/finetuned:";
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    const double fx = early_stop_error(data, 256, nn::RpUse::Fixed,
                                       rp::Scheme::CountSketch, seed);
    const double ft = early_stop_error(data, 256, nn::RpUse::Finetuned,
                                       rp::Scheme::CountSketch, seed);
    wins += ft <= fx;
    d << fmt(" %.4f/%.4f", fx, ft);
  }
  d << "; finetuned <= fixed in " << wins << "/3 seeds";
  return {wins >= 2, d.str()};
}

// ---------------------------------------------------------------- 10

double chi2_oracle(const DenseMatrix& x, std::size_t f,
                   const std::vector<std::uint32_t>& y, std::size_t classes) {
  double table[3][4] = {}, row[3] = {}, col[4] = {};
  for (std::size_t i = 0; i < y.size(); ++i) {
    const auto v = static_cast<std::size_t>(x(i, f));
    table[v][y[i]] += 1;
    row[v] += 1;
    col[y[i]] += 1;
  }
  double chi = 0;
  for (std::size_t v = 0; v < 3; ++v) {
    for (std::size_t k = 0; k < classes; ++k) {
      const double e = row[v] * col[k] / static_cast<double>(y.size());
      if (e > 0) chi += (table[v][k] - e) * (table[v][k] - e) / e;
    }
  }
  return chi;
}

double entropy_oracle(const std::vector<std::uint32_t>& y, std::size_t classes) {
  std::vector<double> c(classes, 0);
  for (auto v : y) c[v] += 1;
  double h = 0;
  for (double n : c) {
    if (n > 0) h -= n / y.size() * std::log2(n / y.size());
  }
  return h;
}

Outcome feature_selection_oracles() {
  std::mt19937_64 rng(10);
  std::uniform_int_distribution<std::size_t> nd(2, 24), dd(1, 8), cd(2, 4);
  std::uniform_int_distribution<int> val(0, 2);
  int chi_exact = 0;
  bool ig_bounded = true;
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = nd(rng), d = dd(rng), classes = cd(rng);
    DenseMatrix x(n, d);
    for (double& v : x.data()) v = val(rng);
    std::vector<std::uint32_t> y(n);
    std::uniform_int_distribution<std::uint32_t> cls(0, classes - 1);
    for (auto& c : y) c = cls(rng);
    const CsrMatrix xs = CsrMatrix::from_dense(x);
    const auto chi = baselines::chi_square_scores(xs, y);
    const auto ig = baselines::info_gain(xs, y);
    const double h = entropy_oracle(y, classes);
    bool all = true;
    for (std::size_t f = 0; f < d; ++f) {
      all = all && chi.scores[f] == chi2_oracle(x, f, y, classes);
      ig_bounded = ig_bounded && ig.scores[f] >= 0.0 &&
                   ig.scores[f] <= h + 1e-12;
    }
    chi_exact += all;
  }
  std::vector<std::uint32_t> balanced;
  for (int i = 0; i < 1000; ++i) balanced.push_back(i % 2);
  const double hb = baselines::entropy(balanced);
  std::ostringstream d;
  d << "chi2 exact on " << chi_exact << "/200; IG within [0, H(S)]: "
    << (ig_bounded ? "yes" : "no") << "; H(balanced) = " << fmt("%.17g", hb);
  return {chi_exact == 200 && ig_bounded && hb == 1.0, d.str()};
}

// ---------------------------------------------------------------- 11

double population_std(std::span<const double> v) {
  double m = 0;
  for (double x : v) m += x;
  m /= static_cast<double>(v.size());
  double s = 0;
  for (double x : v) s += (x - m) * (x - m);
  return std::sqrt(s / static_cast<double>(v.size()));
}

Outcome initializer_statistics() {
  const double target = std::sqrt(2.0 / 200.0);
  double worst = 0;
  const DenseMatrix he = nn::init_weights(200, 500, {nn::InitKind::He}, 11);
  worst = std::max(worst, std::abs(population_std(he.data()) / target - 1));
  for (rp::Scheme s : {rp::Scheme::Gaussian, rp::Scheme::Achlioptas,
                       rp::Scheme::Li, rp::Scheme::Srht}) {
    const DenseMatrix w =
        nn::init_weights(200, 500, {nn::InitKind::RpInit, s, 0.3}, 12);
    worst = std::max(worst, std::abs(population_std(w.data()) / target - 1));
  }
  const double gamma = 0.25;
  const DenseMatrix cs = nn::init_weights(
      200, 500, {nn::InitKind::RpInit, rp::Scheme::CountSketch, gamma}, 13);
  bool cs_ok = true;
  for (double v : cs.data()) cs_ok = cs_ok && (v == 0 || v == gamma || v == -gamma);
  return {worst <= 0.03 && cs_ok,
          fmt("worst |std / sqrt(2/f_in) - 1| = %.4f", worst) +
              "; count sketch entries in {0, +-gamma}: " +
              (cs_ok ? "yes" : "no")};
}

// ---------------------------------------------------------------- 12

Outcome synthetic_generator() {
  synth::SynthSpec s;
  s.d = 10000;
  s.n_total = 5000;
  s.rho = 1e-3;
  s.psi = 0.2;
  s.seed = 12;
  const LabeledDataset all = synth::generate_all(s);
  const double trials = static_cast<double>(s.n_total) * s.d;
  const double band = 3 * std::sqrt(trials * s.rho * (1 - s.rho));
  const double nnz = static_cast<double>(all.features.nnz());
  const bool density_ok = std::abs(nnz - trials * s.rho) <= band;

  synth::SynthSpec quiet = s;
  quiet.sep_mean = 0;
  quiet.sep_std = 0;
  synth::SynthSpec loud = s;
  loud.sep_mean = 4;
  loud.sep_std = 3;
  const auto qa = synth::generate_all(quiet), la = synth::generate_all(loud);
  const bool pattern_ok = pattern_of(qa.features) == pattern_of(la.features);

  // Nearest centroid on each row's mean non-zero value.
  synth::SynthSpec easy = s;
  easy.psi = 1.0;
  easy.sep_mean = 5.0;
  const synth::SynthData e = synth::generate(easy);
  auto row_mean = [](const CsrMatrix& m, std::size_t r) {
    const auto v = m.row_values(r);
    double t = 0;
    for (double x : v) t += x;
    return v.empty() ? 0.0 : t / static_cast<double>(v.size());
  };
  double c[2] = {0, 0}, n[2] = {0, 0};
  for (std::size_t r = 0; r < e.train.size(); ++r) {
    c[e.train.labels[r]] += row_mean(e.train.features, r);
    n[e.train.labels[r]] += 1;
  }
  c[0] /= n[0];
  c[1] /= n[1];
  std::size_t wrong = 0;
  for (std::size_t r = 0; r < e.test.size(); ++r) {
    const double m = row_mean(e.test.features, r);
    wrong += (std::abs(m - c[1]) < std::abs(m - c[0]) ? 1u : 0u) !=
             e.test.labels[r];
  }
  const double err = static_cast<double>(wrong) / e.test.size();
  std::ostringstream d;
  d << fmt("nnz %.0f vs %.0f +- %.0f (3 sigma)", nnz, trials * s.rho, band)
    << "; pattern unchanged by noise: " << (pattern_ok ? "yes" : "no")
    << fmt("; nearest-centroid error %.4f", err);
  return {density_ok && pattern_ok && err < 0.05, d.str()};
}

}  // namespace

int main() {
  synth::SynthData fixture;
  bool have_fixture = false;
  auto fixture_ref = [&]() -> const synth::SynthData& {
    if (!have_fixture) {
      fixture = desk_fixture();
      have_fixture = true;
    }
    return fixture;
  };

  const std::vector<Criterion> criteria = {
      {1, "JL distortion", 30, jl_distortion},
      {2, "SMMP kernel equivalence", 10, smmp_equivalence},
      {3, "streaming Count Sketch", 10, count_sketch_streaming},
      {4, "blocked projection", 60, blocked_projection},
      {5, "complexity trends", 300, complexity_trends},
      {6, "gradient correctness", 60, gradient_correctness},
      {7, "RP-layer contracts", 60, rp_layer_contracts},
      {8, "learning trend", 900, [&] { return learning_trend(fixture_ref()); }},
      {9, "finetuning benefit", 1200,
       [&] { return finetuning_benefit(fixture_ref()); }},
      {10, "feature-selection oracles", 10, feature_selection_oracles},
      {11, "initializer statistics", 5, initializer_statistics},
      {12, "synthetic generator", 30, synthetic_generator},
  };

  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(
                            std::chrono::steady_clock::now() - start)
                            .count();
    const bool in_time = secs < c.limit_seconds;
    const bool pass = o.pass && in_time;
    failed += !pass;
    std::printf("%s %2d %s: %s [%.1f s of %.0f s%s]\n", pass ? "PASS" : "FAIL",
                c.id, c.name, o.detail.c_str(), secs, c.limit_seconds,
                in_time ? "" : ", over limit");
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
