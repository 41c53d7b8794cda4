// SPDX-License-Identifier: MIT

#include "rpnet/nn/checkpoint.hpp"

#include <array>
#include <fstream>

#include "binary_io.hpp"
#include "rpnet/error.hpp"

namespace rpnet::nn {
namespace {

constexpr std::array<char, 4> kMagic = {'R', 'P', 'N', 'N'};

void put_arrays(std::ostream& out, const std::vector<std::vector<double>>& a) {
  bin::put<std::uint64_t>(out, a.size());
  for (const auto& v : a) bin::put_doubles(out, v);
}

std::vector<std::vector<double>> get_arrays(std::istream& in) {
  const auto n = bin::get<std::uint64_t>(in);
  if (n > (1u << 20)) throw FormatError("checkpoint: implausible tensor count");
  std::vector<std::vector<double>> a;
  for (std::uint64_t i = 0; i < n; ++i) a.push_back(bin::get_doubles(in));
  return a;
}

nlohmann::json layers_json(Model& model) {
  nlohmann::json layers = nlohmann::json::array();
  for (std::size_t i = 0; i < model.size(); ++i) {
    layers.push_back(model.layer(i).spec_json());
  }
  return layers;
}

}  // namespace

void write_checkpoint(std::ostream& out, Model& model,
                      const TrainState* state) {
  out.write(kMagic.data(), kMagic.size());
  bin::put<std::uint32_t>(out, kCheckpointVersion);
  const nlohmann::json header = {{"loss", std::string(to_string(model.loss()))},
                                 {"seed", model.seed()},
                                 {"layers", layers_json(model)}};
  bin::put_string(out, header.dump());
  for (std::size_t i = 0; i < model.size(); ++i) {
    model.layer(i).write_structure(out);
  }
  put_arrays(out, model.snapshot());
  bin::put<std::uint8_t>(out, state ? 1 : 0);
  if (state) {
    const nlohmann::json sj = {{"next_epoch", state->next_epoch},
                               {"history", state->history.to_json()}};
    bin::put_string(out, sj.dump());
    put_arrays(out, state->velocity);
    put_arrays(out, state->best);
  }
  if (!out) throw IoError("checkpoint: write failed");
}

Checkpoint read_checkpoint(std::istream& in) {
  std::array<char, 4> magic{};
  if (!in.read(magic.data(), magic.size()) || magic != kMagic) {
    throw FormatError("checkpoint: bad magic (not an RPNN file)");
  }
  const auto version = bin::get<std::uint32_t>(in);
  if (version != kCheckpointVersion) {
    throw FormatError("checkpoint: unsupported version " +
                      std::to_string(version));
  }
  Checkpoint cp;
  try {
    const auto header = nlohmann::json::parse(bin::get_string(in));
    cp.model.set_loss(parse_loss(header.at("loss").get<std::string>()));
    cp.model.set_seed(header.at("seed").get<std::uint64_t>());
    for (const auto& l : header.at("layers")) cp.model.add(layer_from_json(l));
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("checkpoint header: ") + e.what());
  } catch (const InvalidArgument& e) {
    throw FormatError(std::string("checkpoint header: ") + e.what());
  }
  for (std::size_t i = 0; i < cp.model.size(); ++i) {
    cp.model.layer(i).read_structure(in);
  }
  try {
    cp.model.restore(get_arrays(in));
  } catch (const InvalidArgument& e) {
    throw FormatError(std::string("checkpoint tensors: ") + e.what());
  }
  if (bin::get<std::uint8_t>(in) != 0) {
    TrainState st;
    try {
      const auto sj = nlohmann::json::parse(bin::get_string(in));
      st.next_epoch = sj.at("next_epoch").get<std::size_t>();
      st.history = TrainHistory::from_json(sj.at("history"));
    } catch (const nlohmann::json::exception& e) {
      throw FormatError(std::string("checkpoint state: ") + e.what());
    }
    st.velocity = get_arrays(in);
    st.best = get_arrays(in);
    cp.state = std::move(st);
  }
  if (in.peek() != std::char_traits<char>::eof()) {
    throw FormatError("checkpoint: trailing bytes");
  }
  return cp;
}

void save_checkpoint(const std::filesystem::path& path, Model& model,
                     const TrainState* state) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  write_checkpoint(out, model, state);
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return read_checkpoint(in);
}

void save_run(const std::filesystem::path& dir, Model& model,
              const TrainState& state, const nlohmann::json& config) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
  save_checkpoint(dir / "model.rpnn", model, &state);
  nlohmann::json cfg = config;
  cfg["layers"] = layers_json(model);
  {
    std::ofstream out(dir / "config.json");
    if (!out) throw IoError("cannot write " + (dir / "config.json").string());
    out << cfg.dump(2) << "\n";
  }
  std::ofstream out(dir / "history.csv");
  if (!out) throw IoError("cannot write " + (dir / "history.csv").string());
  out << state.history.to_csv();
}

}  // namespace rpnet::nn
