// SPDX-License-Identifier: MIT

// bench, distortion

#include <iostream>
#include <memory>

#include "common.hpp"
#include "rpnet/error.hpp"
#include "rpnet/metrics/bench.hpp"
#include "rpnet/metrics/distortion.hpp"
#include "rpnet/projection/engine.hpp"
#include "rpnet/rp/rng.hpp"

namespace rpnet::cli {
namespace {

// `--out x.csv` names the file; anything else is a directory.
std::pair<fs::path, fs::path> out_file(const fs::path& out,
                                       const std::string& ext,
                                       const std::string& default_name) {
  if (out.extension() == ext) {
    return {fs::absolute(out).parent_path(), out};
  }
  return {out, out / default_name};
}

struct BenchOpts {
  metrics::BenchConfig cfg;
  std::vector<std::string> schemes;
  fs::path out;
};

void run_bench(const BenchOpts& o, const CLI::App& sub, const Globals& g) {
  metrics::BenchConfig cfg = o.cfg;
  if (!o.schemes.empty()) {
    cfg.schemes.clear();
    for (const auto& s : o.schemes) cfg.schemes.push_back(rp::parse_scheme(s));
  }
  if (cfg.k_list.empty()) throw InvalidArgument("--k-list is empty");
  if (!(cfg.density > 0.0 && cfg.density <= 1.0)) {
    throw InvalidArgument("--density must lie in (0, 1]");
  }
  if (cfg.repeats < 3) throw InvalidArgument("--repeats must be at least 3");
  const auto [dir, csv] = out_file(o.out, ".csv", "bench.csv");
  RunManifest m("bench", sub, g);
  m.add_seed("seed", cfg.seed);
  const metrics::BenchReport rep = metrics::bench_schemes(cfg);
  write_text(csv, rep.to_csv());
  fs::path json = csv;
  json.replace_extension(".json");
  write_json(json, rep.to_json());
  m.add_output(csv);
  m.add_output(json);
  m.write(dir);
  std::cout << rep.to_csv();
}

struct DistortionOpts {
  fs::path in, out;
  std::string scheme = "gaussian";
  std::size_t k = 0;
  std::size_t pairs = 10000;
  std::size_t trials = 0;
  std::uint64_t seed = 1;
};

void run_distortion(const DistortionOpts& o, const CLI::App& sub,
                    const Globals& g) {
  rp::RpSchemeSpec spec;
  spec.kind = rp::parse_scheme(o.scheme);
  spec.k = o.k;
  spec.seed = o.seed;
  const auto [dir, json] = out_file(o.out, ".json", "distortion.json");
  RunManifest m("distortion", sub, g);
  m.add_seed("seed", o.seed);
  m.add_input(o.in);
  LoadedData data = load_data(o.in);
  const CsrMatrix a = data.data.is_sparse()
                          ? std::get<CsrMatrix>(data.data.x)
                          : CsrMatrix::from_dense(std::get<DenseMatrix>(data.data.x));
  spec.d = a.cols();
  spec.srht_n_hint = a.rows();
  spec.validate();
  projection::ProjectionPlan plan;
  plan.spec = spec;
  const DenseMatrix r = projection::project(a, plan);
  const auto rep = metrics::pairwise_distortion(
      a, r, o.pairs, rp::derive_seed(o.seed, rp::streams::kPairs));
  nlohmann::json j = rep.to_json();
  j["scheme"] = std::string(rp::to_string(spec.kind));
  j["d"] = spec.d;
  j["k"] = spec.k;
  j["n"] = a.rows();
  j["seed"] = o.seed;
  if (o.trials > 0) {
    j["subspace_distortion"] = metrics::subspace_distortion_mc(
        a, rp::generate(spec), o.trials,
        rp::derive_seed(o.seed, rp::streams::kTrials));
    j["subspace_trials"] = o.trials;
  }
  write_json(json, j);
  m.add_output(json);
  m.write(dir);
  std::cout << "max distortion " << rep.max_distortion << " mean "
            << rep.mean_distortion << " over " << rep.n_pairs << " pairs\n";
}

}  // namespace

void add_metric_commands(CLI::App& app, Action& action, const Globals& g) {
  {
    CLI::App* sub = app.add_subcommand("bench", "Time RP generation and products");
    auto o = std::make_shared<BenchOpts>();
    sub->add_option("--schemes", o->schemes, "Comma separated scheme names")
        ->delimiter(',');
    sub->add_option("--d", o->cfg.d)->capture_default_str();
    sub->add_option("--k-list", o->cfg.k_list)
        ->delimiter(',')
        ->capture_default_str();
    sub->add_option("--density", o->cfg.density)->capture_default_str();
    sub->add_option("--repeats", o->cfg.repeats)->capture_default_str();
    sub->add_option("--n", o->cfg.n, "Fixture rows")->capture_default_str();
    sub->add_option("--seed", o->cfg.seed)->capture_default_str();
    sub->add_option("--out", o->out, "CSV file or directory")->required();
    sub->callback([o, sub, &action, &g] {
      action = [o, sub, &g] { run_bench(*o, *sub, g); };
    });
  }
  {
    CLI::App* sub =
        app.add_subcommand("distortion", "Pairwise distance distortion of a projection");
    auto o = std::make_shared<DistortionOpts>();
    sub->add_option("--in", o->in)->required()->check(CLI::ExistingFile);
    sub->add_option("--scheme", o->scheme)->capture_default_str();
    sub->add_option("--k", o->k)->required()->check(CLI::PositiveNumber);
    sub->add_option("--pairs", o->pairs, "Pair budget")->capture_default_str();
    sub->add_option("--trials", o->trials,
                    "Subspace-embedding trials (0 skips)")
        ->capture_default_str();
    sub->add_option("--seed", o->seed)->capture_default_str();
    sub->add_option("--out", o->out, "JSON file or directory")->required();
    sub->callback([o, sub, &action, &g] {
      action = [o, sub, &g] { run_distortion(*o, *sub, g); };
    });
  }
}

}  // namespace rpnet::cli
