// SPDX-License-Identifier: MIT

#pragma once

#include <chrono>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "rpnet/nn/trainer.hpp"
#include "rpnet/sparse/libsvm.hpp"

namespace rpnet::cli {

namespace fs = std::filesystem;

/// Work to run once the command line has been parsed.
using Action = std::function<void()>;

struct Globals {
  int threads = 1;
};

/// Record of one run, written as manifest.json into every output directory.
class RunManifest {
 public:
  RunManifest(std::string command, const CLI::App& sub, const Globals& g);

  void add_input(const fs::path& p) { inputs_.push_back(p.string()); }
  void add_output(const fs::path& p) { outputs_.push_back(p.string()); }
  void add_seed(const std::string& name, std::uint64_t s) { seeds_[name] = s; }
  nlohmann::json& extra() { return extra_; }

  /// Writes `<dir>/manifest.json`, creating dir when needed.
  void write(const fs::path& dir) const;

 private:
  std::string command_;
  nlohmann::json config_;
  nlohmann::json seeds_ = nlohmann::json::object();
  nlohmann::json extra_ = nlohmann::json::object();
  std::vector<std::string> inputs_, outputs_;
  std::chrono::steady_clock::time_point start_;
  std::string started_at_;
};

void ensure_dir(const fs::path& dir);
void write_text(const fs::path& path, const std::string& text);
void write_json(const fs::path& path, const nlohmann::json& j);
nlohmann::json read_json(const fs::path& path);

/// Labelled examples from a libsvm file or from an .rpdb matrix with its
/// `<file>.labels` sidecar (one label value per line).
struct LoadedData {
  nn::Dataset data;
  std::vector<double> class_values;
};

bool is_rpdb(const fs::path& p);
fs::path labels_sidecar(const fs::path& rpdb);
LoadedData load_data(const fs::path& path,
                     std::optional<std::size_t> expected_dim = {});
void save_labels(const fs::path& path, std::span<const std::uint32_t> labels,
                 std::span<const double> class_values);

/// Re-expresses `d`'s labels in terms of `target` class values. Throws
/// DataError for a label value that `target` lacks.
void remap_labels(LoadedData& d, const std::vector<double>& target);

/// Same matrix with more (empty) columns.
CsrMatrix widen(const CsrMatrix& m, std::size_t cols);

/// Runs the action and maps library exceptions onto exit codes: 1 usage,
/// 2 data, 3 numeric.
int run_guarded(const Action& action);

void add_data_commands(CLI::App& app, Action& action, const Globals& g);
void add_train_commands(CLI::App& app, Action& action, const Globals& g);
void add_metric_commands(CLI::App& app, Action& action, const Globals& g);

}  // namespace rpnet::cli
