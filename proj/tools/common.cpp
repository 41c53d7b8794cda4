// SPDX-License-Identifier: MIT

#include "common.hpp"

#include <algorithm>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iostream>
#include <sstream>

#include "rpnet/error.hpp"
#include "rpnet/projection/rpdb.hpp"
#include "rpnet/version.hpp"

namespace rpnet::cli {

namespace {

// Option values arrive as strings; numbers and booleans are stored typed.
nlohmann::json typed(const std::string& v) {
  if (v == "true") return true;
  if (v == "false") return false;
  char* end = nullptr;
  const double d = std::strtod(v.c_str(), &end);
  if (!v.empty() && end == v.c_str() + v.size()) {
    if (v.find_first_of(".eE") == std::string::npos && v.front() != '-') {
      return std::strtoull(v.c_str(), nullptr, 10);
    }
    return d;
  }
  return v;
}

}  // namespace

RunManifest::RunManifest(std::string command, const CLI::App& sub,
                         const Globals& g)
    : command_(std::move(command)), start_(std::chrono::steady_clock::now()) {
  config_ = nlohmann::json::object();
  for (const CLI::Option* opt : sub.get_options()) {
    std::string name = opt->get_name(false, true);
    if (name.empty() || name == "--help" || name == "-h") continue;
    name.erase(0, name.find_first_not_of('-'));
    if (opt->get_type_size() == 0) {
      config_[name] = opt->count() > 0;
    } else if (opt->count() > 0) {
      const auto& r = opt->results();
      if (r.size() == 1) {
        config_[name] = typed(r.front());
      } else {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& v : r) arr.push_back(typed(v));
        config_[name] = arr;
      }
    } else if (!opt->get_default_str().empty()) {
      config_[name] = typed(opt->get_default_str());
    }
  }
  config_["threads"] = g.threads;
  const std::time_t now = std::time(nullptr);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  started_at_ = buf;
}

void RunManifest::write(const fs::path& dir) const {
  ensure_dir(dir);
  const double secs = std::chrono::duration<double>(
                          std::chrono::steady_clock::now() - start_)
                          .count();
  nlohmann::json j = {{"command", command_},
                      {"config", config_},
                      {"seeds", seeds_},
                      {"inputs", inputs_},
                      {"outputs", outputs_},
                      {"tool_version", std::string(kVersion)},
                      {"started_at", started_at_},
                      {"wall_clock_seconds", secs}};
  if (!extra_.empty()) j["details"] = extra_;
  write_json(dir / "manifest.json", j);
}

void ensure_dir(const fs::path& dir) {
  if (dir.empty()) return;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
}

void write_text(const fs::path& path, const std::string& text) {
  ensure_dir(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << text;
  if (!out) throw IoError("write failed: " + path.string());
}

void write_json(const fs::path& path, const nlohmann::json& j) {
  write_text(path, j.dump(2) + "\n");
}

nlohmann::json read_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

bool is_rpdb(const fs::path& p) { return p.extension() == ".rpdb"; }

fs::path labels_sidecar(const fs::path& rpdb) {
  return fs::path(rpdb.string() + ".labels");
}

void save_labels(const fs::path& path, std::span<const std::uint32_t> labels,
                 std::span<const double> class_values) {
  std::ostringstream out;
  out.precision(17);
  for (std::uint32_t y : labels) out << class_values[y] << "\n";
  write_text(path, out.str());
}

LoadedData load_data(const fs::path& path,
                     std::optional<std::size_t> expected_dim) {
  LoadedData out;
  if (!is_rpdb(path)) {
    LabeledDataset d = load_libsvm(path, expected_dim);
    out.class_values = d.class_values;
    out.data = nn::Dataset::from_labeled(d);
    return out;
  }
  projection::RpdbContents c = projection::load_dense(path);
  if (expected_dim && c.data.cols() != *expected_dim) {
    throw FormatError(path.string() + " has " + std::to_string(c.data.cols()) +
                      " columns, expected " + std::to_string(*expected_dim));
  }
  const fs::path lp = labels_sidecar(path);
  std::ifstream in(lp);
  if (!in) throw IoError("missing label sidecar " + lp.string());
  std::vector<double> raw;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      std::size_t used = 0;
      raw.push_back(std::stod(line, &used));
      if (used != line.size()) throw std::invalid_argument("trailing text");
    } catch (const std::exception&) {
      throw ParseError("bad label '" + line + "' in " + lp.string(), line_no);
    }
  }
  if (raw.size() != c.data.rows()) {
    throw FormatError(lp.string() + " has " + std::to_string(raw.size()) +
                      " labels for " + std::to_string(c.data.rows()) + " rows");
  }
  out.class_values = raw;
  std::sort(out.class_values.begin(), out.class_values.end());
  out.class_values.erase(
      std::unique(out.class_values.begin(), out.class_values.end()),
      out.class_values.end());
  for (double v : raw) {
    out.data.labels.push_back(static_cast<std::uint32_t>(
        std::lower_bound(out.class_values.begin(), out.class_values.end(), v) -
        out.class_values.begin()));
  }
  out.data.x = std::move(c.data);
  return out;
}

void remap_labels(LoadedData& d, const std::vector<double>& target) {
  for (auto& y : d.data.labels) {
    const double v = d.class_values.at(y);
    const auto it = std::find(target.begin(), target.end(), v);
    if (it == target.end()) {
      std::ostringstream msg;
      msg << "label " << v << " does not occur in the training data";
      throw DataError(msg.str());
    }
    y = static_cast<std::uint32_t>(it - target.begin());
  }
  d.class_values = target;
}

CsrMatrix widen(const CsrMatrix& m, std::size_t cols) {
  if (cols < m.cols()) throw InvalidArgument("widen: cannot drop columns");
  return CsrMatrix(
      m.rows(), cols,
      Buffer<std::size_t>(m.row_offsets().begin(), m.row_offsets().end()),
      Buffer<Index>(m.col_indices().begin(), m.col_indices().end()),
      Buffer<double>(m.values().begin(), m.values().end()));
}

int run_guarded(const Action& action) {
  try {
    action();
    return 0;
  } catch (const InvalidArgument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 1;
  } catch (const NumericError& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return 3;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return 2;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace rpnet::cli
