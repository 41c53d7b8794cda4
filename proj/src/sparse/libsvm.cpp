// SPDX-License-Identifier: MIT

#include "rpnet/sparse/libsvm.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <string>
#include <string_view>

#include "rpnet/error.hpp"
#include "rpnet/sparse/ops.hpp"

namespace rpnet {
namespace {

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r'; }

std::string_view next_token(std::string_view& line) {
  std::size_t b = 0;
  while (b < line.size() && is_space(line[b])) ++b;
  std::size_t e = b;
  while (e < line.size() && !is_space(line[e])) ++e;
  const std::string_view tok = line.substr(b, e - b);
  line.remove_prefix(e);
  return tok;
}

bool parse_real(std::string_view s, double& out) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  if (s.empty()) return false;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

bool parse_index(std::string_view s, std::size_t& out) {
  if (s.empty()) return false;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

void append_real(std::string& out, double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  out.append(buf, ptr);
}

}  // namespace

LabeledDataset parse_libsvm(std::istream& in,
                            std::optional<std::size_t> expected_dim) {
  std::vector<double> raw_labels;
  Buffer<std::size_t> offsets{0};
  Buffer<Index> cols;
  Buffer<double> vals;
  std::size_t max_index = 0;
  std::string line;
  std::size_t line_no = 0;

  while (std::getline(in, line)) {
    ++line_no;
    std::string_view rest(line);
    const std::string_view label_tok = next_token(rest);
    if (label_tok.empty() || label_tok.front() == '#') continue;

    double label = 0.0;
    if (!parse_real(label_tok, label)) {
      throw ParseError("malformed label '" + std::string(label_tok) + "'",
                       line_no);
    }
    std::size_t prev = 0;
    for (;;) {
      const std::string_view tok = next_token(rest);
      if (tok.empty()) break;
      if (tok.front() == '#') break;  // trailing comment
      const std::size_t colon = tok.find(':');
      std::size_t idx = 0;
      double val = 0.0;
      if (colon == std::string_view::npos ||
          !parse_index(tok.substr(0, colon), idx) ||
          !parse_real(tok.substr(colon + 1), val)) {
        throw ParseError("malformed token '" + std::string(tok) + "'",
                         line_no);
      }
      if (idx == 0) {
        throw ParseError("feature indices are 1-based; got 0", line_no);
      }
      if (idx <= prev) {
        throw FormatError("line " + std::to_string(line_no) +
                          ": feature indices must be strictly increasing");
      }
      if (expected_dim && idx > *expected_dim) {
        throw FormatError("line " + std::to_string(line_no) + ": index " +
                          std::to_string(idx) + " exceeds dimension " +
                          std::to_string(*expected_dim));
      }
      if (idx - 1 > std::numeric_limits<Index>::max()) {
        throw FormatError("line " + std::to_string(line_no) +
                          ": index too large");
      }
      prev = idx;
      max_index = std::max(max_index, idx);
      cols.push_back(static_cast<Index>(idx - 1));
      vals.push_back(val);
    }
    raw_labels.push_back(label);
    offsets.push_back(cols.size());
  }
  if (in.bad()) throw IoError("read failure while parsing LIBSVM input");

  LabeledDataset out;
  const std::size_t n_cols = expected_dim.value_or(max_index);
  out.features = CsrMatrix(raw_labels.size(), n_cols, std::move(offsets),
                           std::move(cols), std::move(vals));

  std::map<double, std::uint32_t> ids;
  for (double l : raw_labels) ids.emplace(l, 0);
  std::uint32_t next = 0;
  for (auto& [value, id] : ids) {
    id = next++;
    out.class_values.push_back(value);
  }
  out.n_classes = ids.size();
  out.labels.reserve(raw_labels.size());
  for (double l : raw_labels) out.labels.push_back(ids.at(l));
  return out;
}

LabeledDataset load_libsvm(const std::filesystem::path& path,
                           std::optional<std::size_t> expected_dim) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  return parse_libsvm(in, expected_dim);
}

void write_libsvm(std::ostream& out, const LabeledDataset& data) {
  validate(data);
  std::string line;
  const auto& x = data.features;
  for (std::size_t r = 0; r < x.rows(); ++r) {
    line.clear();
    const std::uint32_t id = data.labels[r];
    append_real(line, id < data.class_values.size()
                          ? data.class_values[id]
                          : static_cast<double>(id));
    const auto idx = x.row_indices(r);
    const auto val = x.row_values(r);
    for (std::size_t q = 0; q < idx.size(); ++q) {
      line.push_back(' ');
      line += std::to_string(static_cast<std::size_t>(idx[q]) + 1);
      line.push_back(':');
      append_real(line, val[q]);
    }
    line.push_back('\n');
    out << line;
  }
}

void save_libsvm(const std::filesystem::path& path,
                 const LabeledDataset& data) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  write_libsvm(out, data);
  if (!out) throw IoError("write failure on " + path.string());
}

void validate(const LabeledDataset& data) {
  if (data.labels.size() != data.features.rows()) {
    throw FormatError("dataset: label count differs from row count");
  }
  for (std::uint32_t l : data.labels) {
    if (l >= data.n_classes) throw FormatError("dataset: label out of range");
  }
}

LabeledDataset subset(const LabeledDataset& data,
                      std::span<const std::size_t> rows) {
  LabeledDataset out;
  out.features = gather_rows(data.features, rows);
  out.labels.reserve(rows.size());
  for (std::size_t r : rows) out.labels.push_back(data.labels[r]);
  out.n_classes = data.n_classes;
  out.class_values = data.class_values;
  return out;
}

}  // namespace rpnet
