// SPDX-License-Identifier: MIT

#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>

#include "json.hpp"

#include "rpnet/nn/model.hpp"
#include "rpnet/nn/trainer.hpp"

namespace rpnet::nn {

inline constexpr std::uint32_t kCheckpointVersion = 1;

struct Checkpoint {
  Model model;
  std::optional<TrainState> state;
};

/// Binary layout (little-endian): "RPNN", u32 version, u64 n + n bytes of
/// JSON describing the layers, each layer's structure block, u64 tensor
/// count and per tensor u64 length + f64 values, then u8 has_state and the
/// optional training state.
void write_checkpoint(std::ostream& out, Model& model,
                      const TrainState* state = nullptr);
Checkpoint read_checkpoint(std::istream& in);

void save_checkpoint(const std::filesystem::path& path, Model& model,
                     const TrainState* state = nullptr);
/// Throws IoError when the file cannot be opened, FormatError when it is
/// not a valid checkpoint.
Checkpoint load_checkpoint(const std::filesystem::path& path);

/// Writes `<dir>/model.rpnn`, `<dir>/config.json` (the given config plus
/// the layer list) and `<dir>/history.csv`.
void save_run(const std::filesystem::path& dir, Model& model,
              const TrainState& state, const nlohmann::json& config);

}  // namespace rpnet::nn
