// SPDX-License-Identifier: MIT

#pragma once

#include <cstddef>
#include <span>

#include "rpnet/sparse/dense_matrix.hpp"

namespace rpnet::rp {

enum class FwhtDirection {
  Forward,  // x <- H_t x
  Inverse,  // x <- H_t x / t
};

constexpr bool is_power_of_two(std::size_t n) noexcept {
  return n != 0 && (n & (n - 1)) == 0;
}

/// In-place unnormalized Walsh-Hadamard butterfly; O(t log t).
/// Throws InvalidArgument if x.size() is not a power of two.
void fwht_inplace(std::span<double> x, FwhtDirection dir = FwhtDirection::Forward);

/// Applies the transform to every row of m.
DenseMatrix fwht_rows(const DenseMatrix& m,
                      FwhtDirection dir = FwhtDirection::Forward);

}  // namespace rpnet::rp
