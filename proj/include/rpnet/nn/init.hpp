// SPDX-License-Identifier: MIT

#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>

#include "rpnet/rp/schemes.hpp"
#include "rpnet/sparse/csr_matrix.hpp"
#include "rpnet/sparse/dense_matrix.hpp"

namespace rpnet::nn {

enum class InitKind { LeCun, XavierSigmoid, XavierTanh, He, RpInit };

struct InitScheme {
  InitKind kind = InitKind::He;
  /// RpInit only.
  rp::Scheme rp_scheme = rp::Scheme::Gaussian;
  /// Count Sketch RpInit scale; entries become exactly +-cs_gamma.
  double cs_gamma = 0.3;

  void validate() const;
  bool operator==(const InitScheme&) const = default;
};

/// "lecun", "xavier-sigmoid", "xavier-tanh", "he", "rp:<scheme>" or
/// "rp:countsketch:<gamma>".
std::string to_string(const InitScheme& s);
InitScheme parse_init(std::string_view s);

/// f_in x f_out weights. LeCun U[+-1/sqrt(f_in)], Xavier
/// U[+-sqrt(6/(f_in+f_out))] (x4 for tanh), He N(0, 2/f_in). RpInit draws
/// the scheme's matrix with d = f_in, k = f_out and rescales it to sample
/// std sqrt(2/f_in); Count Sketch instead multiplies by cs_gamma.
DenseMatrix init_weights(std::size_t f_in, std::size_t f_out,
                         const InitScheme& scheme, std::uint64_t seed);

/// RpInit kept sparse: stored entries are the scheme's non-zeros (every
/// entry for dense schemes).
CsrMatrix rp_init_pattern(std::size_t f_in, std::size_t f_out,
                          const InitScheme& scheme, std::uint64_t seed);

/// Population std over all f_in * f_out entries, zeros included.
double sample_std(const CsrMatrix& w);
double sample_std(const DenseMatrix& w);

}  // namespace rpnet::nn
