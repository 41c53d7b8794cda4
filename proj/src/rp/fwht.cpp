// SPDX-License-Identifier: MIT

#include "rpnet/rp/fwht.hpp"

#include "rpnet/error.hpp"

namespace rpnet::rp {

void fwht_inplace(std::span<double> x, FwhtDirection dir) {
  const std::size_t t = x.size();
  if (!is_power_of_two(t)) {
    throw InvalidArgument("fwht: length " + std::to_string(t) +
                          " is not a power of two");
  }
  for (std::size_t h = 1; h < t; h *= 2) {
    for (std::size_t i = 0; i < t; i += 2 * h) {
      for (std::size_t j = i; j < i + h; ++j) {
        const double a = x[j];
        const double b = x[j + h];
        x[j] = a + b;
        x[j + h] = a - b;
      }
    }
  }
  if (dir == FwhtDirection::Inverse) {
    const double inv = 1.0 / static_cast<double>(t);
    for (double& v : x) v *= inv;
  }
}

DenseMatrix fwht_rows(const DenseMatrix& m, FwhtDirection dir) {
  if (!is_power_of_two(m.cols())) {
    throw InvalidArgument("fwht_rows: row length " + std::to_string(m.cols()) +
                          " is not a power of two");
  }
  DenseMatrix out = m;
  for (std::size_t r = 0; r < out.rows(); ++r) fwht_inplace(out.row(r), dir);
  return out;
}

}  // namespace rpnet::rp
