// SPDX-License-Identifier: MIT

#include "rpnet/projection/rpdb.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

#include "rpnet/error.hpp"

namespace rpnet::projection {
namespace {

constexpr std::array<char, 4> kMagic = {'R', 'P', 'D', 'B'};

static_assert(std::endian::native == std::endian::little ||
                  std::endian::native == std::endian::big,
              "mixed-endian hosts are not supported");

template <class T>
T to_little(T v) {
  if constexpr (std::endian::native == std::endian::big) {
    auto bytes = std::bit_cast<std::array<unsigned char, sizeof(T)>>(v);
    std::reverse(bytes.begin(), bytes.end());
    return std::bit_cast<T>(bytes);
  } else {
    return v;
  }
}

template <class T>
void put(std::ostream& out, T v) {
  const T le = to_little(v);
  out.write(reinterpret_cast<const char*>(&le), sizeof(T));
}

template <class T>
T get(std::istream& in, const char* what) {
  T v;
  if (!in.read(reinterpret_cast<char*>(&v), sizeof(T))) {
    throw FormatError(std::string("rpdb: truncated ") + what);
  }
  return to_little(v);
}

void put_array(std::ostream& out, const std::vector<double>& a) {
  for (double v : a) put(out, v);
}

std::vector<double> get_array(std::istream& in, std::uint64_t len) {
  std::vector<double> a;
  a.reserve(static_cast<std::size_t>(std::min<std::uint64_t>(len, 1 << 20)));
  for (std::uint64_t i = 0; i < len; ++i) a.push_back(get<double>(in, "stats"));
  return a;
}

}  // namespace

void write_dense(std::ostream& out, const DenseMatrix& r,
                 const NormalizationStats* stats, RpdbPrecision precision) {
  out.write(kMagic.data(), kMagic.size());
  put(out, static_cast<std::uint32_t>(precision));
  put(out, static_cast<std::uint64_t>(r.rows()));
  put(out, static_cast<std::uint64_t>(r.cols()));
  if (precision == RpdbPrecision::Float32) {
    for (double v : r.data()) put(out, static_cast<float>(v));
  } else {
    for (double v : r.data()) put(out, v);
  }
  if (stats != nullptr) {
    put(out, static_cast<std::uint8_t>(stats->kind));
    if (stats->kind == NormKind::Standardize) {
      put(out, static_cast<std::uint64_t>(stats->mean.size()));
      put_array(out, stats->mean);
      put_array(out, stats->std);
    } else {
      put(out, static_cast<std::uint64_t>(stats->max_abs.size()));
      put_array(out, stats->max_abs);
    }
  }
  if (!out) throw IoError("rpdb: write failed");
}

RpdbContents read_dense(std::istream& in) {
  std::array<char, 4> magic{};
  if (!in.read(magic.data(), magic.size()) || magic != kMagic) {
    throw FormatError("rpdb: bad magic, not an RPDB file");
  }
  const auto version = get<std::uint32_t>(in, "header");
  if (version != static_cast<std::uint32_t>(RpdbPrecision::Float32) &&
      version != static_cast<std::uint32_t>(RpdbPrecision::Float64)) {
    throw FormatError("rpdb: unsupported version " + std::to_string(version));
  }
  const auto rows = get<std::uint64_t>(in, "header");
  const auto cols = get<std::uint64_t>(in, "header");
  if (cols != 0 && rows > (std::uint64_t{1} << 48) / cols) {
    throw FormatError("rpdb: implausible shape");
  }
  RpdbContents c{DenseMatrix(rows, cols), std::nullopt};
  auto data = c.data.data();
  if (version == 1) {
    for (double& v : data) v = get<float>(in, "payload");
  } else {
    for (double& v : data) v = get<double>(in, "payload");
  }
  std::uint8_t kind;
  if (!in.read(reinterpret_cast<char*>(&kind), 1)) return c;
  NormalizationStats s;
  const auto len = get<std::uint64_t>(in, "stats");
  if (kind == static_cast<std::uint8_t>(NormKind::Standardize)) {
    s.kind = NormKind::Standardize;
    s.mean = get_array(in, len);
    s.std = get_array(in, len);
  } else if (kind == static_cast<std::uint8_t>(NormKind::MaxAbs)) {
    s.kind = NormKind::MaxAbs;
    s.max_abs = get_array(in, len);
  } else {
    throw FormatError("rpdb: unknown stats kind " + std::to_string(kind));
  }
  if (in.peek() != std::char_traits<char>::eof()) {
    throw FormatError("rpdb: trailing bytes after stats block");
  }
  c.stats = std::move(s);
  return c;
}

void save_dense(const DenseMatrix& r, const NormalizationStats* stats,
                const std::filesystem::path& path, RpdbPrecision precision) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  write_dense(out, r, stats, precision);
  out.flush();
  if (!out) throw IoError("write to " + path.string() + " failed");
}

RpdbContents load_dense(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return read_dense(in);
}

}  // namespace rpnet::projection
