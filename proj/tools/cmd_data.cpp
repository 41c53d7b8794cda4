// SPDX-License-Identifier: MIT

// synth gen, project, select, tfidf

#include <algorithm>
#include <cstdlib>
#include <iostream>
#include <memory>
#include <set>

#include "common.hpp"
#include "rpnet/baselines/feature_selection.hpp"
#include "rpnet/baselines/tfidf.hpp"
#include "rpnet/error.hpp"
#include "rpnet/projection/engine.hpp"
#include "rpnet/projection/normalization.hpp"
#include "rpnet/projection/rpdb.hpp"
#include "rpnet/sparse/ops.hpp"
#include "rpnet/synth/synthetic.hpp"

namespace rpnet::cli {
namespace {

struct SynthOpts {
  synth::SynthSpec spec;
  fs::path out;
  std::string preset;
  std::size_t divisor = 1;
};

void write_synth(const synth::SynthSpec& spec, const fs::path& dir,
                 RunManifest& m) {
  const synth::SynthData data = synth::generate(spec);
  for (const auto& w : data.warnings) std::cerr << "warning: " << w << "\n";
  ensure_dir(dir);
  save_libsvm(dir / "train.libsvm", data.train);
  save_libsvm(dir / "test.libsvm", data.test);
  write_json(dir / "synth.json", data.sidecar(spec));
  for (const char* f : {"train.libsvm", "test.libsvm", "synth.json"}) {
    m.add_output(dir / f);
  }
  std::cout << dir.string() << ": " << data.train.size() << " train, "
            << data.test.size() << " test rows, d=" << spec.d << "\n";
}

void run_synth(const SynthOpts& o, const CLI::App& sub, const Globals& g) {
  if (o.preset.empty()) {
    o.spec.validate();
    RunManifest m("synth gen", sub, g);
    m.add_seed("seed", o.spec.seed);
    write_synth(o.spec, o.out, m);
    m.write(o.out);
    return;
  }
  for (const char* flag : {"--d", "--n", "--rho", "--psi"}) {
    if (sub.count(flag) > 0) {
      throw InvalidArgument(std::string(flag) + " conflicts with --preset");
    }
  }
  std::vector<synth::SynthSpec> specs =
      synth::grid_preset(o.preset, o.divisor);
  for (auto& s : specs) {
    s.seed = o.spec.seed;
    s.sep_mean = o.spec.sep_mean;
    s.sep_std = o.spec.sep_std;
    s.validate();
  }
  RunManifest top("synth gen", sub, g);
  top.add_seed("seed", o.spec.seed);
  for (std::size_t i = 0; i < specs.size(); ++i) {
    const fs::path dir = o.out / (o.preset + "-" + std::to_string(i));
    RunManifest m("synth gen", sub, g);
    m.add_seed("seed", specs[i].seed);
    m.extra()["preset_member"] = i;
    m.extra()["spec"] = specs[i].to_json();
    write_synth(specs[i], dir, m);
    m.write(dir);
    top.add_output(dir);
  }
  top.write(o.out);
}

struct ProjectOpts {
  fs::path in, test, out, spill_dir;
  std::string scheme = "gaussian";
  std::size_t k = 0;
  std::uint64_t seed = 1;
  std::size_t h = 1, v = 1;
  std::optional<std::size_t> budget;
  std::string normalize = "none";
  std::string precision = "f32";
};

CsrMatrix as_csr(const nn::Dataset& d) {
  if (d.is_sparse()) return std::get<CsrMatrix>(d.x);
  return CsrMatrix::from_dense(std::get<DenseMatrix>(d.x));
}

// Exact nnz(P), generated in column slices to bound memory.
std::size_t count_nnz(const rp::RpSchemeSpec& spec) {
  constexpr std::size_t kSliceEntries = std::size_t{1} << 22;
  const std::size_t rows = spec.kind == rp::Scheme::Srht
                               ? spec.srht_padded_dim()
                               : spec.d;
  const std::size_t per = std::max<std::size_t>(1, kSliceEntries / rows);
  const std::size_t v = std::min(spec.k, (spec.k + per - 1) / per);
  std::size_t nnz = 0;
  for (std::size_t j = 0; j < v; ++j) nnz += rp::gen_slice(spec, j, v).nnz();
  return nnz;
}

void run_project(const ProjectOpts& o, const CLI::App& sub, const Globals& g) {
  const rp::Scheme scheme = rp::parse_scheme(o.scheme);
  if (o.normalize != "none" && o.normalize != "standardize" &&
      o.normalize != "maxabs") {
    throw InvalidArgument("--normalize must be none, standardize or maxabs");
  }
  if (o.precision != "f32" && o.precision != "f64") {
    throw InvalidArgument("--precision must be f32 or f64");
  }
  RunManifest m("project", sub, g);
  m.add_seed("seed", o.seed);
  m.add_input(o.in);

  LoadedData train = load_data(o.in);
  CsrMatrix a = as_csr(train.data);
  std::optional<LoadedData> test;
  CsrMatrix at;
  if (!o.test.empty()) {
    m.add_input(o.test);
    test = load_data(o.test);
    at = as_csr(test->data);
    if (at.cols() > a.cols()) a = widen(a, at.cols());
    if (at.cols() < a.cols()) at = widen(at, a.cols());
  }

  projection::ProjectionPlan plan;
  plan.spec.kind = scheme;
  plan.spec.d = a.cols();
  plan.spec.k = o.k;
  plan.spec.seed = o.seed;
  plan.spec.srht_n_hint = a.rows();
  plan.h = o.h;
  plan.v = o.v;
  plan.memory_budget = o.budget;
  plan.spill_dir = o.spill_dir;
  plan.validate();
  if (o.budget && sub.count("--h") == 0 && sub.count("--v") == 0) {
    std::tie(plan.h, plan.v) =
        projection::suggest_slicing(a, plan.spec, *o.budget);
  }

  std::optional<projection::NormalizationStats> maxabs;
  if (o.normalize == "maxabs") {
    maxabs = projection::fit_maxabs(a);
    a = projection::apply_maxabs(a, *maxabs);
    if (test) at = projection::apply_maxabs(at, *maxabs);
  }

  projection::ProjectionReport rep;
  DenseMatrix r = projection::project(a, plan, &rep);
  std::optional<DenseMatrix> rt;
  if (test) rt = projection::project(at, plan);

  std::optional<projection::NormalizationStats> stats;
  if (o.normalize == "standardize") {
    stats = projection::fit_standardize(r);
    projection::apply_standardize_inplace(r, *stats);
    if (rt) projection::apply_standardize_inplace(*rt, *stats);
  } else if (maxabs) {
    stats = maxabs;
  }
  if (!all_finite(r) || (rt && !all_finite(*rt))) {
    throw NumericError("projection produced non-finite values");
  }

  const auto prec = o.precision == "f32" ? projection::RpdbPrecision::Float32
                                         : projection::RpdbPrecision::Float64;
  ensure_dir(o.out);
  const fs::path rp_path = o.out / "projection.rpdb";
  projection::save_dense(r, stats ? &*stats : nullptr, rp_path, prec);
  save_labels(labels_sidecar(rp_path), train.data.labels, train.class_values);
  m.add_output(rp_path);
  m.add_output(labels_sidecar(rp_path));
  if (rt) {
    const fs::path tp = o.out / "test.rpdb";
    projection::save_dense(*rt, stats ? &*stats : nullptr, tp, prec);
    save_labels(labels_sidecar(tp), test->data.labels, test->class_values);
    m.add_output(tp);
    m.add_output(labels_sidecar(tp));
  }

  const std::size_t nnz_p = count_nnz(plan.spec);
  nlohmann::json report = {{"scheme", std::string(rp::to_string(scheme))},
                           {"d", plan.spec.d},
                           {"k", plan.spec.k},
                           {"seed", plan.spec.seed},
                           {"n_train", r.rows()},
                           {"n_test", rt ? rt->rows() : 0},
                           {"nnz_p", nnz_p},
                           {"nnz_a", a.nnz()},
                           {"h", plan.h},
                           {"v", plan.v},
                           {"spilled", rep.spilled},
                           {"streaming_count_sketch", rep.streaming_count_sketch},
                           {"blocks", rep.blocks},
                           {"max_triple_bytes", rep.max_triple_bytes},
                           {"normalize", o.normalize},
                           {"precision", o.precision}};
  write_json(o.out / "report.json", report);
  m.add_output(o.out / "report.json");
  m.write(o.out);
  std::cout << "projected " << r.rows() << " x " << plan.spec.d << " -> "
            << plan.spec.k << " with " << rp::to_string(scheme)
            << ", nnz(P)=" << nnz_p << "\n";
}

struct SelectOpts {
  fs::path in, out_scores, out_reduced;
  std::string method = "chi2";
  std::size_t k = 0;
};

void run_select(const SelectOpts& o, const CLI::App& sub, const Globals& g) {
  const auto method = baselines::parse_score_method(o.method);
  if (o.out_scores.empty() && o.out_reduced.empty()) {
    throw InvalidArgument("give --out-scores and/or --out-reduced");
  }
  if (!o.out_reduced.empty() && o.k == 0) {
    throw InvalidArgument("--out-reduced needs --k >= 1");
  }
  RunManifest m("select", sub, g);
  m.add_input(o.in);
  LabeledDataset data = load_libsvm(o.in);
  const auto scores =
      baselines::score_features(method, data.features, data.labels);
  for (const auto& w : scores.warnings) std::cerr << "warning: " << w << "\n";
  if (!o.out_scores.empty()) {
    write_text(o.out_scores, scores.to_csv());
    m.add_output(o.out_scores);
  }
  if (!o.out_reduced.empty()) {
    const auto keep = baselines::select_k_best(scores.scores, o.k);
    data.features = select_columns(data.features, keep);
    ensure_dir(o.out_reduced.parent_path());
    save_libsvm(o.out_reduced, data);
    m.add_output(o.out_reduced);
    m.extra()["selected_features"] = keep;
  }
  std::set<fs::path> dirs;
  for (const fs::path& p : {o.out_scores, o.out_reduced}) {
    if (!p.empty()) dirs.insert(fs::absolute(p).parent_path());
  }
  for (const auto& d : dirs) m.write(d);
}

struct TfidfOpts {
  fs::path in, out, apply, idf;
  bool fit = false;
};

void run_tfidf(const TfidfOpts& o, const CLI::App& sub, const Globals& g) {
  if (o.fit == !o.apply.empty()) {
    throw InvalidArgument("give exactly one of --fit and --apply");
  }
  RunManifest m("tfidf", sub, g);
  m.add_input(o.in);
  LabeledDataset data = load_libsvm(o.in);
  const fs::path dir = fs::absolute(o.out).parent_path();
  if (o.fit) {
    if (std::any_of(data.features.values().begin(),
                    data.features.values().end(),
                    [](double v) { return v < 0.0; })) {
      throw DataError(o.in.string() + ": term counts must be non-negative");
    }
    auto [x, model] = baselines::tfidf_transform(data.features);
    data.features = std::move(x);
    const fs::path idf = o.idf.empty() ? dir / "idf.json" : o.idf;
    write_json(idf, model.to_json());
    m.add_output(idf);
  } else {
    m.add_input(o.apply);
    const auto model = baselines::IdfModel::from_json(read_json(o.apply));
    data.features = baselines::apply_tfidf(data.features, model);
  }
  ensure_dir(dir);
  save_libsvm(o.out, data);
  m.add_output(o.out);
  m.write(dir);
}

}  // namespace

void add_data_commands(CLI::App& app, Action& action, const Globals& g) {
  {
    CLI::App* synth = app.add_subcommand("synth", "Synthetic data");
    synth->require_subcommand(1);
    CLI::App* gen =
        synth->add_subcommand("gen", "Generate a two-class sparse dataset");
    auto o = std::make_shared<SynthOpts>();
    gen->add_option("--d", o->spec.d, "Features")->capture_default_str();
    gen->add_option("--n", o->spec.n_total, "Examples (train + test)")
        ->capture_default_str();
    gen->add_option("--rho", o->spec.rho, "Density")->capture_default_str();
    gen->add_option("--psi", o->spec.psi, "Significant feature fraction")
        ->capture_default_str();
    gen->add_option("--sep-mean", o->spec.sep_mean)->capture_default_str();
    gen->add_option("--sep-std", o->spec.sep_std)->capture_default_str();
    gen->add_option("--train-fraction", o->spec.train_fraction)
        ->capture_default_str();
    gen->add_option("--seed", o->spec.seed)->capture_default_str();
    gen->add_option("--out", o->out, "Output directory")->required();
    gen->add_option("--preset", o->preset, "rho_grid or psi_grid");
    gen->add_option("--preset-divisor", o->divisor,
                    "Scale presets down by this factor")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    gen->callback([o, gen, &action, &g] {
      action = [o, gen, &g] { run_synth(*o, *gen, g); };
    });
  }
  {
    CLI::App* sub = app.add_subcommand("project", "Randomly project a dataset");
    auto o = std::make_shared<ProjectOpts>();
    sub->set_help_flag("--help", "Print this help message and exit");
    if (const char* env = std::getenv("RP_SPILL_DIR")) o->spill_dir = env;
    sub->add_option("--in", o->in, "Training data (.libsvm or .rpdb)")
        ->required()
        ->check(CLI::ExistingFile);
    sub->add_option("--test", o->test, "Test data projected with the same P")
        ->check(CLI::ExistingFile);
    sub->add_option("--scheme", o->scheme,
                    "gaussian|achlioptas|li|srht|countsketch")
        ->capture_default_str();
    sub->add_option("--k", o->k, "Target dimension")
        ->required()
        ->check(CLI::PositiveNumber);
    sub->add_option("--seed", o->seed)->capture_default_str();
    sub->add_option("--h", o->h, "Row slices")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    sub->add_option("--v", o->v, "Column slices of P")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    sub->add_option("--budget-bytes", o->budget, "Working-set bound")
        ->check(CLI::PositiveNumber);
    sub->add_option("--normalize", o->normalize, "none|standardize|maxabs")
        ->capture_default_str();
    sub->add_option("--spill-dir", o->spill_dir,
                    "Spill directory (default $RP_SPILL_DIR)");
    sub->add_option("--precision", o->precision, "f32|f64")
        ->capture_default_str();
    sub->add_option("--out", o->out, "Output directory")->required();
    sub->callback([o, sub, &action, &g] {
      action = [o, sub, &g] { run_project(*o, *sub, g); };
    });
  }
  {
    CLI::App* sub = app.add_subcommand("select", "Filter feature selection");
    auto o = std::make_shared<SelectOpts>();
    sub->add_option("--method", o->method, "chi2|fscore|ig")
        ->capture_default_str();
    sub->add_option("--k", o->k, "Features to keep");
    sub->add_option("--in", o->in)->required()->check(CLI::ExistingFile);
    sub->add_option("--out-scores", o->out_scores, "CSV of scores");
    sub->add_option("--out-reduced", o->out_reduced,
                    "libsvm file with the k best features");
    sub->callback([o, sub, &action, &g] {
      action = [o, sub, &g] { run_select(*o, *sub, g); };
    });
  }
  {
    CLI::App* sub = app.add_subcommand("tfidf", "TF-IDF weighting");
    auto o = std::make_shared<TfidfOpts>();
    sub->add_option("--in", o->in, "Term counts (.libsvm)")
        ->required()
        ->check(CLI::ExistingFile);
    sub->add_flag("--fit", o->fit, "Fit IDF on --in");
    sub->add_option("--apply", o->apply, "Apply a fitted idf.json")
        ->check(CLI::ExistingFile);
    sub->add_option("--idf", o->idf, "Where --fit writes the model");
    sub->add_option("--out", o->out, "Output .libsvm")->required();
    sub->callback([o, sub, &action, &g] {
      action = [o, sub, &g] { run_tfidf(*o, *sub, g); };
    });
  }
}

}  // namespace rpnet::cli
