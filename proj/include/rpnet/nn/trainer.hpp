// SPDX-License-Identifier: MIT

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

#include "rpnet/nn/model.hpp"
#include "rpnet/nn/optimizer.hpp"
#include "rpnet/projection/engine.hpp"
#include "rpnet/sparse/libsvm.hpp"

namespace rpnet::nn {

/// Network input: raw sparse rows, dense rows, or rows already projected
/// by a fixed RP layer 0.
struct Dataset {
  std::variant<CsrMatrix, DenseMatrix> x;
  std::vector<std::uint32_t> labels;
  bool pre_projected = false;

  std::size_t size() const noexcept { return labels.size(); }
  std::size_t dim() const noexcept;
  bool is_sparse() const noexcept {
    return std::holds_alternative<CsrMatrix>(x);
  }
  void validate() const;

  static Dataset from_labeled(const LabeledDataset& d);
};

Dataset subset(const Dataset& d, std::span<const std::size_t> rows);

/// Deterministic split of [0, n) into (first, second) with
/// round(n * fraction) rows in `second`; both sorted.
std::pair<std::vector<std::size_t>, std::vector<std::size_t>> split_indices(
    std::size_t n, double fraction, std::uint64_t seed);

struct EpochRecord {
  std::size_t epoch = 0;
  double train_loss = 0.0;
  double val_error = 0.0;
  std::optional<double> test_error;
  double lr = 0.0;
  double momentum = 0.0;
};

struct TrainHistory {
  std::vector<EpochRecord> epochs;
  std::size_t best_epoch = 0;
  double best_val_error = 1.0;
  /// Test error at best_epoch (the early-stopping error).
  std::optional<double> early_stop_test_error;

  std::string to_csv() const;
  nlohmann::json to_json() const;
  static TrainHistory from_json(const nlohmann::json& j);
};

/// Everything needed to continue a run bit for bit.
struct TrainState {
  std::size_t next_epoch = 0;
  TrainHistory history;
  std::vector<std::vector<double>> velocity;
  TensorSnapshot best;
};

DenseMatrix predict(Model& model, const Dataset& data,
                    std::size_t batch = 1024);
double error_rate(Model& model, const Dataset& data, std::size_t batch = 1024);

/// Mini-batch SGD with momentum over shuffled batches. After every epoch
/// records the training loss and the validation (and test) error; the
/// parameters of the best validation epoch are restored at the end.
class Trainer {
 public:
  using EpochCallback = std::function<void(const Trainer&)>;

  Trainer(Model& model, TrainConfig config);

  /// `test` may be null. Throws DimensionMismatch on inconsistent inputs.
  TrainHistory run(const Dataset& train, const Dataset& val,
                   const Dataset* test, const EpochCallback& on_epoch = {});

  const TrainConfig& config() const noexcept { return cfg_; }
  Model& model() const noexcept { return model_; }
  const TrainState& state() const noexcept { return state_; }
  /// Resume point; velocity must match the model's params().
  void set_state(TrainState s) { state_ = std::move(s); }

 private:
  Model& model_;
  TrainConfig cfg_;
  SgdMomentum opt_;
  TrainState state_;
};

/// Pre-projection for a model whose layer 0 is a fixed RP layer: projects
/// the raw sparse inputs (with the out-of-core engine when the layer knows
/// its generating scheme), fits standardization on `train` only, installs
/// the statistics in the layer and marks all sets pre_projected.
void preproject_fixed(Model& model, Dataset& train,
                      std::span<Dataset* const> others,
                      std::optional<std::size_t> memory_budget = std::nullopt);

}  // namespace rpnet::nn
