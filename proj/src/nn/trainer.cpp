// SPDX-License-Identifier: MIT

#include "rpnet/nn/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <string>

#include "rpnet/error.hpp"
#include "rpnet/projection/normalization.hpp"
#include "rpnet/rp/rng.hpp"
#include "rpnet/sparse/ops.hpp"

namespace rpnet::nn {
namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

DenseMatrix run_forward(Model& model, const Dataset& d, bool train,
                        std::size_t epoch, std::uint64_t step) {
  if (d.pre_projected) {
    return model.forward_projected(std::get<DenseMatrix>(d.x), train, epoch,
                                   step);
  }
  if (d.is_sparse()) {
    return model.forward(std::get<CsrMatrix>(d.x), train, epoch, step);
  }
  return model.forward(std::get<DenseMatrix>(d.x), train, epoch, step);
}

std::size_t expected_width(Model& model, const Dataset& d) {
  return d.pre_projected ? model.layer(0).out_dim() : model.in_dim();
}

void check_dataset(Model& model, const Dataset& d, const char* name) {
  d.validate();
  if (d.size() == 0) {
    throw InvalidArgument(std::string(name) + " set is empty");
  }
  if (d.dim() != expected_width(model, d)) {
    throw DimensionMismatch(std::string(name) + " set has width " +
                            std::to_string(d.dim()) + ", model expects " +
                            std::to_string(expected_width(model, d)));
  }
}

/// Contiguous batch boundaries; a trailing batch of one row is merged into
/// its predecessor so batch norm always sees at least two rows.
std::vector<std::size_t> batch_bounds(std::size_t n, std::size_t bs) {
  std::vector<std::size_t> b;
  for (std::size_t i = 0; i < n; i += bs) b.push_back(i);
  b.push_back(n);
  if (b.size() > 2 && n - b[b.size() - 2] == 1) b.erase(b.end() - 2);
  return b;
}

}  // namespace

std::size_t Dataset::dim() const noexcept {
  return std::visit([](const auto& m) { return m.cols(); }, x);
}

void Dataset::validate() const {
  const std::size_t rows =
      std::visit([](const auto& m) { return m.rows(); }, x);
  if (rows != labels.size()) {
    throw DimensionMismatch("dataset has " + std::to_string(rows) +
                            " rows but " + std::to_string(labels.size()) +
                            " labels");
  }
  if (pre_projected && is_sparse()) {
    throw InvalidArgument("pre-projected data must be dense");
  }
}

Dataset Dataset::from_labeled(const LabeledDataset& d) {
  Dataset out;
  out.x = d.features;
  out.labels = d.labels;
  return out;
}

Dataset subset(const Dataset& d, std::span<const std::size_t> rows) {
  Dataset out;
  out.pre_projected = d.pre_projected;
  out.x = std::visit(
      [&](const auto& m) -> std::variant<CsrMatrix, DenseMatrix> {
        return gather_rows(m, rows);
      },
      d.x);
  out.labels.reserve(rows.size());
  for (std::size_t r : rows) out.labels.push_back(d.labels.at(r));
  return out;
}

std::pair<std::vector<std::size_t>, std::vector<std::size_t>> split_indices(
    std::size_t n, double fraction, std::uint64_t seed) {
  if (!(fraction >= 0.0 && fraction <= 1.0)) {
    throw InvalidArgument("split fraction must lie in [0, 1]");
  }
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  rp::RngStream s(seed, rp::streams::kSplit);
  for (std::size_t i = n; i > 1; --i) {
    std::swap(perm[i - 1], perm[s.below(i)]);
  }
  const auto cut = static_cast<std::size_t>(
      std::llround(static_cast<double>(n) * fraction));
  std::vector<std::size_t> second(perm.begin(), perm.begin() + cut);
  std::vector<std::size_t> first(perm.begin() + cut, perm.end());
  std::sort(first.begin(), first.end());
  std::sort(second.begin(), second.end());
  return {first, second};
}

std::string TrainHistory::to_csv() const {
  std::string out = "epoch,train_loss,val_error,test_error,lr,momentum\n";
  for (const auto& e : epochs) {
    out += std::to_string(e.epoch) + "," + num(e.train_loss) + "," +
           num(e.val_error) + "," + (e.test_error ? num(*e.test_error) : "") +
           "," + num(e.lr) + "," + num(e.momentum) + "\n";
  }
  return out;
}

nlohmann::json TrainHistory::to_json() const {
  nlohmann::json ep = nlohmann::json::array();
  for (const auto& e : epochs) {
    nlohmann::json r = {{"epoch", e.epoch},
                        {"train_loss", e.train_loss},
                        {"val_error", e.val_error},
                        {"lr", e.lr},
                        {"momentum", e.momentum}};
    if (e.test_error) r["test_error"] = *e.test_error;
    ep.push_back(r);
  }
  nlohmann::json j = {{"epochs", ep},
                      {"best_epoch", best_epoch},
                      {"best_val_error", best_val_error}};
  if (early_stop_test_error) j["early_stop_test_error"] = *early_stop_test_error;
  return j;
}

TrainHistory TrainHistory::from_json(const nlohmann::json& j) {
  TrainHistory h;
  for (const auto& r : j.at("epochs")) {
    EpochRecord e;
    e.epoch = r.at("epoch").get<std::size_t>();
    e.train_loss = r.at("train_loss").get<double>();
    e.val_error = r.at("val_error").get<double>();
    e.lr = r.at("lr").get<double>();
    e.momentum = r.at("momentum").get<double>();
    if (r.contains("test_error")) e.test_error = r.at("test_error").get<double>();
    h.epochs.push_back(e);
  }
  h.best_epoch = j.at("best_epoch").get<std::size_t>();
  h.best_val_error = j.at("best_val_error").get<double>();
  if (j.contains("early_stop_test_error")) {
    h.early_stop_test_error = j.at("early_stop_test_error").get<double>();
  }
  return h;
}

DenseMatrix predict(Model& model, const Dataset& data, std::size_t batch) {
  check_dataset(model, data, "evaluation");
  if (batch == 0) throw InvalidArgument("predict: batch must be >= 1");
  std::vector<DenseMatrix> parts;
  for (std::size_t b = 0; b < data.size(); b += batch) {
    std::vector<std::size_t> rows(std::min(batch, data.size() - b));
    std::iota(rows.begin(), rows.end(), b);
    parts.push_back(run_forward(model, subset(data, rows), false, 0, 0));
  }
  return vstack(std::span<const DenseMatrix>(parts));
}

double error_rate(Model& model, const Dataset& data, std::size_t batch) {
  const auto y = predict_labels(predict(model, data, batch));
  std::size_t wrong = 0;
  for (std::size_t i = 0; i < y.size(); ++i) wrong += y[i] != data.labels[i];
  return static_cast<double>(wrong) / static_cast<double>(y.size());
}

Trainer::Trainer(Model& model, TrainConfig config)
    : model_(model), cfg_(config) {
  cfg_.validate();
}

TrainHistory Trainer::run(const Dataset& train, const Dataset& val,
                          const Dataset* test, const EpochCallback& on_epoch) {
  check_dataset(model_, train, "training");
  check_dataset(model_, val, "validation");
  if (test != nullptr) check_dataset(model_, *test, "test");
  if (RpLayer* rp = model_.rp_layer();
      rp != nullptr && rp->mode() == RpMode::Finetuned) {
    rp->set_eta(cfg_.eta);
  }

  const std::size_t n = train.size();
  const auto bounds = batch_bounds(n, cfg_.batch_size);
  const std::size_t n_batches = bounds.size() - 1;
  const DenseMatrix targets = make_targets(train.labels, model_.out_dim());

  auto params = model_.params();
  if (!state_.velocity.empty()) {
    if (state_.velocity.size() != params.size()) {
      throw InvalidArgument("resume state does not match the model");
    }
    opt_.set_velocity(state_.velocity);
  }

  const std::uint64_t shuffle_seed =
      rp::derive_seed(cfg_.seed, rp::streams::kShuffle);
  std::vector<std::size_t> perm(n);
  for (std::size_t e = state_.next_epoch; e < cfg_.epochs; ++e) {
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    rp::RngStream s(shuffle_seed, e);
    for (std::size_t i = n; i > 1; --i) std::swap(perm[i - 1], perm[s.below(i)]);

    const double lr = cfg_.lr_at(e);
    const double mu = cfg_.momentum_at(e);
    double loss_sum = 0.0;
    for (std::size_t b = 0; b < n_batches; ++b) {
      const std::span<const std::size_t> rows(perm.data() + bounds[b],
                                              bounds[b + 1] - bounds[b]);
      const Dataset xb = subset(train, rows);
      const DenseMatrix tb = gather_rows(targets, rows);
      const std::uint64_t step = e * n_batches + b;
      double loss = 0.0;
      try {
        const DenseMatrix out = run_forward(model_, xb, true, e, step);
        loss = model_.backward(out, tb);
      } catch (const NumericError& err) {
        throw NumericError(std::string(err.what()) + " in epoch " +
                           std::to_string(e) + ", batch " + std::to_string(b));
      }
      loss_sum += loss * static_cast<double>(rows.size());
      opt_.step(params, model_.update_mask(step), lr, mu, cfg_.l2);
    }

    EpochRecord rec;
    rec.epoch = e;
    rec.train_loss = loss_sum / static_cast<double>(n);
    rec.val_error = error_rate(model_, val);
    if (test != nullptr) rec.test_error = error_rate(model_, *test);
    rec.lr = lr;
    rec.momentum = mu;
    auto& h = state_.history;
    if (h.epochs.empty() || rec.val_error < h.best_val_error) {
      h.best_epoch = e;
      h.best_val_error = rec.val_error;
      h.early_stop_test_error = rec.test_error;
      state_.best = model_.snapshot();
    }
    h.epochs.push_back(rec);
    state_.next_epoch = e + 1;
    state_.velocity = opt_.velocity();
    if (on_epoch) on_epoch(*this);
  }
  if (!state_.best.empty()) model_.restore(state_.best);
  return state_.history;
}

void preproject_fixed(Model& model, Dataset& train,
                      std::span<Dataset* const> others,
                      std::optional<std::size_t> memory_budget) {
  RpLayer* rp = model.rp_layer();
  if (rp == nullptr || rp->mode() != RpMode::Fixed) {
    throw InvalidArgument("pre-projection needs a fixed RP layer 0");
  }
  std::vector<Dataset*> all{&train};
  all.insert(all.end(), others.begin(), others.end());
  for (Dataset* d : all) {
    if (d->pre_projected || !d->is_sparse()) {
      throw InvalidArgument("pre-projection needs raw sparse inputs");
    }
    if (d->dim() != rp->in_dim()) {
      throw DimensionMismatch("pre-projection: data width " +
                              std::to_string(d->dim()) + ", RP layer expects " +
                              std::to_string(rp->in_dim()));
    }
  }
  auto project_one = [&](const CsrMatrix& a) {
    if (!rp->source_spec()) return rp->project_raw(a);
    projection::ProjectionPlan plan;
    plan.spec = *rp->source_spec();
    if (memory_budget) {
      plan.memory_budget = memory_budget;
      std::tie(plan.h, plan.v) =
          projection::suggest_slicing(a, plan.spec, *memory_budget);
    }
    return projection::project(a, plan);
  };
  std::vector<DenseMatrix> projected;
  for (Dataset* d : all) projected.push_back(project_one(std::get<CsrMatrix>(d->x)));
  const NormalizationStats stats = projection::fit_standardize(projected[0]);
  for (std::size_t i = 0; i < all.size(); ++i) {
    projection::apply_standardize_inplace(projected[i], stats);
    all[i]->x = std::move(projected[i]);
    all[i]->pre_projected = true;
  }
  rp->set_output_normalization(stats);
}

}  // namespace rpnet::nn
