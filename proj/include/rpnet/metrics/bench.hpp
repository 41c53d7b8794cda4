// SPDX-License-Identifier: MIT

#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "rpnet/rp/schemes.hpp"
#include "rpnet/sparse/csr_matrix.hpp"

namespace rpnet::metrics {

struct BenchRow {
  rp::Scheme scheme = rp::Scheme::Gaussian;
  std::size_t d = 0;
  std::size_t k = 0;
  std::size_t n = 0;
  double density = 0.0;
  /// Medians over the repeats, in seconds.
  double gen_time = 0.0;
  double proj_time = 0.0;
  std::size_t nnz_p = 0;
};

struct BenchReport {
  std::vector<BenchRow> rows;

  /// Throws InvalidArgument when the cell was not measured.
  const BenchRow& at(rp::Scheme scheme, std::size_t k) const;
  std::string to_csv() const;
  nlohmann::json to_json() const;
};

struct BenchConfig {
  std::size_t d = 100000;
  std::vector<std::size_t> k_list = {100, 1000};
  double density = 1e-4;
  std::vector<rp::Scheme> schemes = {rp::Scheme::Gaussian,
                                     rp::Scheme::Achlioptas, rp::Scheme::Li,
                                     rp::Scheme::Srht, rp::Scheme::CountSketch};
  std::size_t repeats = 5;
  /// Rows of the random fixture.
  std::size_t n = 10000;
  std::uint64_t seed = 1;
  /// Dense projection slices are generated at most this large.
  std::size_t slice_bytes = std::size_t{128} << 20;
};

/// Uniformly random n x d CSR fixture with i.i.d. N(0,1) values at the given
/// density.
CsrMatrix random_fixture(std::size_t n, std::size_t d, double density,
                         std::uint64_t seed);

/// Times P generation and A * P for every (scheme, k) cell on
/// random_fixture(cfg.n, cfg.d, cfg.density, cfg.seed). Dense schemes use
/// the csr x dense kernel, sparse schemes the sparse-sparse product with a
/// sparse result. Throws InvalidArgument when repeats < 3.
BenchReport bench_schemes(const BenchConfig& cfg);

/// Same measurements on caller-provided data.
BenchReport bench_schemes(const CsrMatrix& a, const BenchConfig& cfg);

}  // namespace rpnet::metrics
