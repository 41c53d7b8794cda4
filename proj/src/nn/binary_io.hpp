// SPDX-License-Identifier: MIT

#pragma once

// Little-endian primitives shared by the checkpoint reader and writer.

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "rpnet/error.hpp"

namespace rpnet::nn::bin {

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
T get(std::istream& in) {
  T v;
  if (!in.read(reinterpret_cast<char*>(&v), sizeof(T))) {
    throw FormatError("checkpoint: unexpected end of file");
  }
  return to_little(v);
}

inline void put_doubles(std::ostream& out, std::span<const double> a) {
  put<std::uint64_t>(out, a.size());
  for (double v : a) put(out, v);
}

/// Reads a length-prefixed array; `limit` guards against corrupt lengths.
inline std::vector<double> get_doubles(std::istream& in,
                                       std::uint64_t limit = 1ULL << 40) {
  const auto n = get<std::uint64_t>(in);
  if (n > limit) throw FormatError("checkpoint: implausible array length");
  std::vector<double> a;
  a.reserve(static_cast<std::size_t>(std::min<std::uint64_t>(n, 1 << 20)));
  for (std::uint64_t i = 0; i < n; ++i) a.push_back(get<double>(in));
  return a;
}

inline void put_string(std::ostream& out, const std::string& s) {
  put<std::uint64_t>(out, s.size());
  out.write(s.data(), static_cast<std::streamsize>(s.size()));
}

inline std::string get_string(std::istream& in) {
  const auto n = get<std::uint64_t>(in);
  if (n > (1ULL << 32)) throw FormatError("checkpoint: implausible string");
  std::string s(static_cast<std::size_t>(n), '\0');
  if (!in.read(s.data(), static_cast<std::streamsize>(n))) {
    throw FormatError("checkpoint: unexpected end of file");
  }
  return s;
}

}  // namespace rpnet::nn::bin
