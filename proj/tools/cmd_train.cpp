// SPDX-License-Identifier: MIT

// train, eval

#include <iomanip>
#include <iostream>
#include <memory>

#include "common.hpp"
#include "rpnet/error.hpp"
#include "rpnet/nn/arch.hpp"
#include "rpnet/nn/checkpoint.hpp"
#include "rpnet/rp/rng.hpp"
#include "rpnet/synth/synthetic.hpp"

namespace rpnet::cli {
namespace {

struct DataPaths {
  fs::path train, test;
  std::optional<std::size_t> sidecar_dim;
};

// A directory holds train.libsvm (or projection.rpdb) and optionally a test
// file and a synth.json sidecar; anything else is a single data file.
DataPaths resolve_data(const fs::path& data, const fs::path& test) {
  DataPaths p;
  if (fs::is_directory(data)) {
    for (const char* name : {"train.libsvm", "projection.rpdb"}) {
      if (fs::exists(data / name)) {
        p.train = data / name;
        break;
      }
    }
    if (p.train.empty()) {
      throw IoError(data.string() +
                    " holds neither train.libsvm nor projection.rpdb");
    }
    for (const char* name : {"test.libsvm", "test.rpdb"}) {
      if (fs::exists(data / name)) {
        p.test = data / name;
        break;
      }
    }
    if (fs::exists(data / "synth.json")) {
      p.sidecar_dim = synth::SynthSpec::from_json(
                          read_json(data / "synth.json").at("spec"))
                          .d;
    }
  } else if (fs::exists(data)) {
    p.train = data;
  } else {
    throw IoError("no such file or directory: " + data.string());
  }
  if (!test.empty()) p.test = test;
  return p;
}

// Brings sparse inputs to a common width; dense inputs must already agree.
void align_widths(std::vector<LoadedData*> sets, std::size_t min_dim) {
  std::size_t width = min_dim;
  for (auto* s : sets) width = std::max(width, s->data.dim());
  for (auto* s : sets) {
    if (s->data.dim() == width) continue;
    if (!s->data.is_sparse()) {
      throw DimensionMismatch("dense input has " +
                              std::to_string(s->data.dim()) +
                              " columns, expected " + std::to_string(width));
    }
    s->data.x = widen(std::get<CsrMatrix>(s->data.x), width);
  }
}

struct TrainOpts {
  fs::path data, test, checkpoint_dir;
  std::string arch = "desk";
  std::string rp = "none";
  std::string scheme = "gaussian";
  std::string activation = "relu";
  nn::TrainConfig cfg;
  double dropout = 1.0;
  double val_fraction = 0.1;
  double cs_gamma = 0.3;
  bool no_batchnorm = false;
  bool resume = false;
  std::optional<std::size_t> budget;
};

nn::ArchSpec arch_from_flag(const std::string& s) {
  if (s == "wide" || s == "desk" || s == "xor") return nn::arch_preset(s);
  return nn::parse_arch(s);
}

void print_epoch(const nn::EpochRecord& e) {
  std::cout << "epoch " << e.epoch << " loss " << std::setprecision(6)
            << e.train_loss << " val_error " << e.val_error;
  if (e.test_error) std::cout << " test_error " << *e.test_error;
  std::cout << "\n";
}

void run_train(const TrainOpts& o, const CLI::App& sub, const Globals& g) {
  o.cfg.validate();
  const nn::ArchSpec arch = arch_from_flag(o.arch);
  nn::ModelOptions mo;
  mo.rp = nn::parse_rp_use(o.rp);
  mo.rp_scheme = rp::parse_scheme(o.scheme);
  mo.hidden = nn::parse_activation(o.activation);
  mo.batch_norm = !o.no_batchnorm;
  mo.dropout_keep = o.dropout;
  mo.cs_gamma = o.cs_gamma;
  if (!(o.dropout > 0.0 && o.dropout <= 1.0)) {
    throw InvalidArgument("--dropout is a keep probability in (0, 1]");
  }
  if (!(o.val_fraction > 0.0 && o.val_fraction < 1.0)) {
    throw InvalidArgument("--val-fraction must lie in (0, 1)");
  }
  if (o.cfg.eta != 1.0 && mo.rp != nn::RpUse::Finetuned) {
    throw InvalidArgument("--eta only applies to --rp finetuned");
  }
  const fs::path ckpt = o.checkpoint_dir / "checkpoint.rpnn";
  if (o.resume && !fs::exists(ckpt)) {
    throw IoError("--resume: no checkpoint at " + ckpt.string());
  }

  RunManifest m("train", sub, g);
  m.add_seed("seed", o.cfg.seed);
  const DataPaths paths = resolve_data(o.data, o.test);
  m.add_input(paths.train);
  LoadedData train = load_data(paths.train);
  std::optional<LoadedData> test;
  if (!paths.test.empty()) {
    m.add_input(paths.test);
    test = load_data(paths.test);
    remap_labels(*test, train.class_values);
  }
  std::vector<LoadedData*> sets{&train};
  if (test) sets.push_back(&*test);
  align_widths(sets, std::max(paths.sidecar_dim.value_or(0),
                              arch.input.value_or(0)));
  const std::size_t dim = train.data.dim();
  if (arch.input && *arch.input != dim) {
    throw DimensionMismatch("--arch input " + std::to_string(*arch.input) +
                            " but data has " + std::to_string(dim) +
                            " columns");
  }
  const std::size_t n_classes = train.class_values.size();
  const std::size_t out = arch.widths.back();
  if (n_classes < 2) throw DataError("training data has a single class");
  if ((out == 1 && n_classes != 2) || (out > 1 && out != n_classes)) {
    throw InvalidArgument("output width " + std::to_string(out) +
                          " does not fit " + std::to_string(n_classes) +
                          " classes");
  }

  const auto [tr_idx, va_idx] =
      nn::split_indices(train.data.size(), o.val_fraction, o.cfg.seed);
  nn::Dataset tr = nn::subset(train.data, tr_idx);
  nn::Dataset va = nn::subset(train.data, va_idx);
  std::optional<nn::Dataset> te;
  if (test) te = std::move(test->data);

  nn::Model model = nn::build_model(dim, arch, mo, o.cfg.seed);
  std::optional<nn::TrainState> state;
  if (o.resume) {
    nn::Checkpoint c = nn::load_checkpoint(ckpt);
    if (!c.state) throw FormatError(ckpt.string() + " has no training state");
    model = std::move(c.model);
    state = std::move(c.state);
    m.add_input(ckpt);
    m.extra()["resumed_at_epoch"] = state->next_epoch;
  }
  if (model.in_dim() != dim) {
    throw DimensionMismatch("checkpoint expects " +
                            std::to_string(model.in_dim()) + " inputs");
  }
  const nn::RpLayer* rpl = model.rp_layer();
  if (rpl != nullptr && rpl->mode() == nn::RpMode::Fixed && tr.is_sparse()) {
    std::vector<nn::Dataset*> others{&va};
    if (te) others.push_back(&*te);
    nn::preproject_fixed(model, tr, others, o.budget);
  }

  // The output width decides the loss unless --loss was given.
  nn::TrainConfig cfg = o.cfg;
  if (sub.count("--loss") > 0) {
    model.set_loss(cfg.loss);
  } else {
    cfg.loss = model.loss();
  }
  nn::Trainer trainer(model, cfg);
  if (state) trainer.set_state(std::move(*state));
  ensure_dir(o.checkpoint_dir);
  const nn::TrainHistory h = trainer.run(
      tr, va, te ? &*te : nullptr, [&](const nn::Trainer& t) {
        print_epoch(t.state().history.epochs.back());
        nn::save_checkpoint(ckpt, t.model(), &t.state());
      });

  nlohmann::json config = {{"train", cfg.to_json()},
                           {"arch", arch.to_string()},
                           {"input_dim", dim},
                           {"rp", o.rp},
                           {"scheme", o.scheme},
                           {"class_values", train.class_values},
                           {"val_fraction", o.val_fraction}};
  nn::save_run(o.checkpoint_dir, model, trainer.state(), config);
  nlohmann::json result = {{"best_epoch", h.best_epoch},
                           {"best_val_error", h.best_val_error},
                           {"epochs_run", h.epochs.size()},
                           {"n_train", tr.size()},
                           {"n_val", va.size()}};
  if (h.early_stop_test_error) {
    result["early_stop_test_error"] = *h.early_stop_test_error;
  }
  write_json(o.checkpoint_dir / "result.json", result);
  for (const char* f : {"model.rpnn", "checkpoint.rpnn", "config.json",
                        "history.csv", "result.json"}) {
    m.add_output(o.checkpoint_dir / f);
  }
  m.write(o.checkpoint_dir);
  std::cout << "best epoch " << h.best_epoch << " val_error "
            << h.best_val_error;
  if (h.early_stop_test_error) {
    std::cout << " test_error " << *h.early_stop_test_error;
  }
  std::cout << "\n";
}

struct EvalOpts {
  fs::path checkpoint, data, out;
};

void run_eval(const EvalOpts& o, const CLI::App& sub, const Globals& g) {
  const fs::path file = fs::is_directory(o.checkpoint)
                            ? o.checkpoint / "model.rpnn"
                            : o.checkpoint;
  const fs::path run_dir = file.parent_path();
  const fs::path out = o.out.empty() ? run_dir / "eval" : o.out;
  RunManifest m("eval", sub, g);
  m.add_input(file);
  nn::Checkpoint c = nn::load_checkpoint(file);

  fs::path data_file = o.data;
  if (fs::is_directory(o.data)) {
    const DataPaths p = resolve_data(o.data, {});
    if (p.test.empty()) throw IoError(o.data.string() + " holds no test file");
    data_file = p.test;
  }
  m.add_input(data_file);
  LoadedData data = load_data(data_file);
  if (fs::exists(run_dir / "config.json")) {
    const auto cfg = read_json(run_dir / "config.json");
    if (cfg.contains("class_values")) {
      remap_labels(data, cfg.at("class_values").get<std::vector<double>>());
    }
  }
  if (data.data.dim() < c.model.in_dim() && data.data.is_sparse()) {
    data.data.x = widen(std::get<CsrMatrix>(data.data.x), c.model.in_dim());
  }
  if (data.data.dim() != c.model.in_dim()) {
    throw DimensionMismatch("data has " + std::to_string(data.data.dim()) +
                            " columns, model expects " +
                            std::to_string(c.model.in_dim()));
  }
  const double err = nn::error_rate(c.model, data.data);
  write_json(out / "result.json",
             {{"error_rate", err}, {"n", data.data.size()}});
  m.add_output(out / "result.json");
  m.write(out);
  std::cout << "error_rate " << std::setprecision(6) << err << "\n";
}

}  // namespace

void add_train_commands(CLI::App& app, Action& action, const Globals& g) {
  {
    CLI::App* sub = app.add_subcommand("train", "Train a network");
    auto o = std::make_shared<TrainOpts>();
    auto& c = o->cfg;
    sub->add_option("--data", o->data, "Data directory or file")->required();
    sub->add_option("--test", o->test, "Test file (overrides the directory's)")
        ->check(CLI::ExistingFile);
    sub->add_option("--arch", o->arch,
                    "Dash notation such as d-1000-3000-3000-1, or a preset")
        ->capture_default_str();
    sub->add_option("--rp", o->rp, "none|fixed|finetuned")
        ->capture_default_str();
    sub->add_option("--scheme", o->scheme, "RP scheme of the input layer")
        ->capture_default_str();
    sub->add_option("--cs-gamma", o->cs_gamma,
                    "Count Sketch magnitude for finetuned RP")
        ->capture_default_str();
    sub->add_option("--eta", c.eta, "Update probability of a finetuned RP layer")
        ->capture_default_str();
    sub->add_option("--lr0", c.lr0)->capture_default_str();
    sub->add_option("--lr-decay", c.lr_decay)->capture_default_str();
    sub->add_option("--momentum", c.momentum0)->capture_default_str();
    sub->add_option("--momentum-max", c.momentum_max)->capture_default_str();
    sub->add_option("--momentum-ramp", c.momentum_ramp_epochs,
                    "Epochs to reach --momentum-max (0: epochs/10)")
        ->capture_default_str();
    sub->add_option("--l2", c.l2)->capture_default_str();
    sub->add_option("--dropout", o->dropout, "Keep probability")
        ->capture_default_str();
    sub->add_option("--batch", c.batch_size)->capture_default_str();
    sub->add_option("--epochs", c.epochs)->capture_default_str();
    sub->add_option("--seed", c.seed)->capture_default_str();
    sub->add_option("--loss", [&c](const CLI::results_t& r) {
      c.loss = nn::parse_loss(r.front());
      return true;
    }, "mse|bce|softmax-ce (default: from the output width)");
    sub->add_option("--activation", o->activation,
                    "Hidden activation: relu|lrelu:<a>|tanh|sigmoid|linear")
        ->capture_default_str();
    sub->add_flag("--no-batchnorm", o->no_batchnorm);
    sub->add_option("--val-fraction", o->val_fraction)->capture_default_str();
    sub->add_option("--budget-bytes", o->budget,
                    "Memory bound for fixed-RP pre-projection");
    sub->add_option("--checkpoint-dir", o->checkpoint_dir,
                    "Run directory for checkpoints and reports")
        ->required();
    sub->add_flag("--resume", o->resume,
                  "Continue from <checkpoint-dir>/checkpoint.rpnn");
    sub->callback([o, sub, &action, &g] {
      action = [o, sub, &g] { run_train(*o, *sub, g); };
    });
  }
  {
    CLI::App* sub = app.add_subcommand("eval", "Error rate of a trained model");
    auto o = std::make_shared<EvalOpts>();
    sub->add_option("--checkpoint", o->checkpoint, "model.rpnn or run dir")
        ->required()
        ->check(CLI::ExistingPath);
    sub->add_option("--data", o->data, "Data file or directory")
        ->required()
        ->check(CLI::ExistingPath);
    sub->add_option("--out", o->out, "Report directory (default <run>/eval)");
    sub->callback([o, sub, &action, &g] {
      action = [o, sub, &g] { run_eval(*o, *sub, g); };
    });
  }
}

}  // namespace rpnet::cli
