// SPDX-License-Identifier: MIT

#include <sstream>

#include "doctest.h"
#include "rpnet/error.hpp"
#include "rpnet/sparse/libsvm.hpp"
#include "rpnet/sparse/ops.hpp"
#include "test_util.hpp"

using namespace rpnet;
using rpnet::testing::random_csr;
using rpnet::testing::random_dense;
using rpnet::testing::schoolbook_matmul;

TEST_CASE("csr construction rejects broken invariants") {
  CHECK_THROWS_AS(CsrMatrix(1, 3, {0, 2}, {2, 1}, {1.0, 1.0}), FormatError);
  CHECK_THROWS_AS(CsrMatrix(1, 3, {0, 1}, {3}, {1.0}), FormatError);
  CHECK_THROWS_AS(CsrMatrix(1, 3, {0, 2}, {0}, {1.0}), FormatError);
  CHECK_THROWS_AS(CsrMatrix(2, 3, {0, 1}, {0}, {1.0}), FormatError);
  CHECK_NOTHROW(CsrMatrix(2, 3, {0, 1, 1}, {2}, {1.0}));
}

TEST_CASE("parse_libsvm reads labels and 1-based indices") {
  std::istringstream in("1 3:2.5 7:1.0\n-1 1:4.0\n");
  const auto ds = parse_libsvm(in);
  CHECK(ds.features.rows() == 2);
  CHECK(ds.features.cols() == 7);
  CHECK(ds.features.nnz() == 3);
  CHECK(ds.n_classes == 2);
  CHECK(ds.class_values == std::vector<double>{-1.0, 1.0});
  CHECK(ds.labels == std::vector<std::uint32_t>{1, 0});
  CHECK(ds.features.at(0, 2) == 2.5);
  CHECK(ds.features.at(0, 6) == 1.0);
  CHECK(ds.features.at(1, 0) == 4.0);
}

TEST_CASE("parse_libsvm skips blank and comment lines") {
  std::istringstream in("# header\n\n+1 2:1\n   \n0 1:3 # trailing\n");
  const auto ds = parse_libsvm(in);
  CHECK(ds.features.rows() == 2);
  CHECK(ds.labels == std::vector<std::uint32_t>{1, 0});
}

TEST_CASE("parse_libsvm errors") {
  SUBCASE("duplicate index") {
    std::istringstream in("1 2:1 2:1\n");
    CHECK_THROWS_AS(parse_libsvm(in), FormatError);
  }
  SUBCASE("decreasing index") {
    std::istringstream in("1 3:1 2:1\n");
    CHECK_THROWS_AS(parse_libsvm(in), FormatError);
  }
  SUBCASE("malformed token carries the line number") {
    std::istringstream in("1 1:1\n1 2:x\n");
    try {
      parse_libsvm(in);
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.line() == 2);
    }
  }
  SUBCASE("zero index") {
    std::istringstream in("1 0:1\n");
    CHECK_THROWS_AS(parse_libsvm(in), ParseError);
  }
  SUBCASE("index beyond expected dim") {
    std::istringstream in("1 5:1\n");
    CHECK_THROWS_AS(parse_libsvm(in, 4), FormatError);
  }
}

TEST_CASE("parse_libsvm honours expected_dim") {
  std::istringstream in("1 2:1\n");
  CHECK(parse_libsvm(in, 10).features.cols() == 10);
}

TEST_CASE("libsvm parse-serialize-parse is a fixed point") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    LabeledDataset ds;
    ds.features = random_csr(15, 40, 0.2, rng);
    ds.n_classes = 3;
    ds.class_values = {-1.0, 0.5, 2.0};
    std::uniform_int_distribution<std::uint32_t> lab(0, 2);
    for (std::size_t i = 0; i < 15; ++i) ds.labels.push_back(lab(rng));

    std::ostringstream first;
    write_libsvm(first, ds);
    std::istringstream in1(first.str());
    const auto parsed = parse_libsvm(in1, 40);
    std::ostringstream second;
    write_libsvm(second, parsed);
    CHECK(first.str() == second.str());
    CHECK(parsed.features == ds.features);
  }
}

TEST_CASE("csr_dense_matmul") {
  SUBCASE("identity leaves P unchanged") {
    const auto p = DenseMatrix::from_rows({{1, 2}, {3, 4}, {5, 6}});
    CHECK(csr_dense_matmul(CsrMatrix::identity(3), p) == p);
  }
  SUBCASE("small example against schoolbook oracle") {
    const auto a_dense = DenseMatrix::from_rows({{0, 2}, {1, 0}});
    const auto p = DenseMatrix::from_rows({{1, 1}, {1, 0}});
    const auto expected = schoolbook_matmul(a_dense, p);
    CHECK(expected == DenseMatrix::from_rows({{2, 0}, {1, 1}}));
    CHECK(csr_dense_matmul(CsrMatrix::from_dense(a_dense), p) == expected);
  }
  SUBCASE("all-zero A annihilates") {
    std::mt19937_64 rng(1);
    const auto out = csr_dense_matmul(CsrMatrix(5, 4), random_dense(4, 3, rng));
    CHECK(out == DenseMatrix(5, 3));
  }
  SUBCASE("dimension mismatch") {
    CHECK_THROWS_AS(csr_dense_matmul(CsrMatrix(2, 3), DenseMatrix(4, 2)),
                    DimensionMismatch);
  }
}

TEST_CASE("csr_csr_matmul") {
  std::mt19937_64 rng(11);
  SUBCASE("identity keeps the pattern") {
    const auto p = random_csr(3, 5, 0.5, rng);
    CHECK(csr_csr_matmul(CsrMatrix::identity(3), p) == p);
  }
  SUBCASE("20x30 times 30x8 equals the dense oracle") {
    const auto a = random_csr(20, 30, 0.1, rng);
    const auto p = random_csr(30, 8, 0.2, rng);
    const auto oracle = schoolbook_matmul(a.to_dense(), p.to_dense());
    CHECK(max_abs_diff(csr_csr_matmul(a, p).to_dense(), oracle) <= 1e-12);
  }
  SUBCASE("zero row stays empty") {
    const auto a = CsrMatrix(2, 3, {0, 0, 1}, {1}, {2.0});
    const auto p = random_csr(3, 4, 1.0, rng);
    const auto out = csr_csr_matmul(a, p);
    CHECK(out.row_nnz(0) == 0);
    CHECK(out.row_nnz(1) == 4);
  }
  SUBCASE("cancellation zeros are dropped") {
    const auto a = CsrMatrix(1, 2, {0, 2}, {0, 1}, {1.0, 1.0});
    const auto p = CsrMatrix(2, 2, {0, 2, 4}, {0, 1, 0, 1}, {1.0, 2.0, -1.0, 3.0});
    const auto out = csr_csr_matmul(a, p);
    CHECK(out.nnz() == 1);
    CHECK(out.at(0, 1) == 5.0);
  }
  SUBCASE("dimension mismatch") {
    CHECK_THROWS_AS(csr_csr_matmul(CsrMatrix(2, 3), CsrMatrix(2, 3)),
                    DimensionMismatch);
  }
}

TEST_CASE("property: SMMP agrees with the dense kernel over random shapes") {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<std::size_t> dim(1, 64);
  std::uniform_real_distribution<double> dens(0.0, 0.5);
  for (int trial = 0; trial < 120; ++trial) {
    const std::size_t n = dim(rng), d = dim(rng), k = dim(rng);
    const auto a = random_csr(n, d, dens(rng), rng);
    const auto p = random_csr(d, k, dens(rng), rng);
    const auto sparse = csr_csr_matmul(a, p).to_dense();
    const auto dense = csr_dense_matmul(a, p.to_dense());
    REQUIRE(max_abs_diff(sparse, dense) <= 1e-12);
  }
}

TEST_CASE("slicing") {
  std::mt19937_64 rng(5);
  const auto a = random_csr(9, 13, 0.3, rng);
  SUBCASE("full row range is the matrix itself") {
    CHECK(row_slice(a, 0, a.rows()) == a);
  }
  SUBCASE("width-1 column slices reassemble bit-exactly") {
    std::vector<CsrMatrix> parts;
    for (std::size_t c = 0; c < a.cols(); ++c) {
      parts.push_back(col_slice(a, c, c + 1));
    }
    CHECK(hstack(parts) == a);
    const auto dense = a.to_dense();
    std::vector<DenseMatrix> dparts;
    for (std::size_t c = 0; c < dense.cols(); ++c) {
      dparts.push_back(col_slice(dense, c, c + 1));
    }
    CHECK(hstack(dparts) == dense);
  }
  SUBCASE("empty or out-of-range slices are rejected") {
    CHECK_THROWS_AS(row_slice(a, 3, 3), InvalidArgument);
    CHECK_THROWS_AS(col_slice(a, 0, a.cols() + 1), InvalidArgument);
    CHECK_THROWS_AS(row_slice(a.to_dense(), 5, 2), InvalidArgument);
  }
}

TEST_CASE("property: any h x v partition reassembles exactly") {
  std::mt19937_64 rng(77);
  std::uniform_int_distribution<std::size_t> dim(1, 40);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = dim(rng), d = dim(rng);
    const auto a = random_csr(n, d, 0.25, rng);
    std::uniform_int_distribution<std::size_t> hs(1, n), vs(1, d);
    const std::size_t h = hs(rng), v = vs(rng);
    std::vector<CsrMatrix> rows;
    for (auto [b, e] : split_ranges(n, h)) {
      if (b == e) continue;
      std::vector<CsrMatrix> cols;
      const auto band = row_slice(a, b, e);
      for (auto [cb, ce] : split_ranges(d, v)) {
        if (cb == ce) continue;
        cols.push_back(col_slice(band, cb, ce));
      }
      rows.push_back(hstack(cols));
    }
    REQUIRE(vstack(rows) == a);
  }
}

TEST_CASE("split_ranges uses ceil width with a remainder") {
  const auto r = split_ranges(10, 4);
  REQUIRE(r.size() == 4);
  CHECK(r[0] == std::pair<std::size_t, std::size_t>{0, 3});
  CHECK(r[3] == std::pair<std::size_t, std::size_t>{9, 10});
}

TEST_CASE("density and row statistics") {
  CHECK(density(CsrMatrix(2, 2, {0, 1, 1}, {0}, {1.0})) == 0.25);
  const CsrMatrix empty;
  CHECK(density(empty) == 0.0);
  CHECK(nnz_per_row_stats(empty).max == 0);

  // Rows shaped like the url dataset: mean 71, max 414 non-zeros.
  CsrBuilder b(3'231'961);
  const std::vector<std::size_t> lengths = {414, 1, 1, 1, 1, 8};
  for (std::size_t len : lengths) {
    for (std::size_t c = 0; c < len; ++c) b.push(static_cast<Index>(c * 7), 1.0);
    b.finish_row();
  }
  const auto stats = nnz_per_row_stats(std::move(b).build());
  CHECK(stats.mean == doctest::Approx(71.0));
  CHECK(stats.max == 414);
}

TEST_CASE("gather_rows and select_columns") {
  const auto a = CsrMatrix::from_dense(
      DenseMatrix::from_rows({{1, 0, 2}, {0, 3, 0}, {4, 0, 5}}));
  const std::vector<std::size_t> rows = {2, 0};
  CHECK(gather_rows(a, rows).to_dense() ==
        DenseMatrix::from_rows({{4, 0, 5}, {1, 0, 2}}));
  const std::vector<std::size_t> cols = {0, 2};
  CHECK(select_columns(a, cols).to_dense() ==
        DenseMatrix::from_rows({{1, 2}, {0, 0}, {4, 5}}));
}

TEST_CASE("dense products match the schoolbook oracle") {
  std::mt19937_64 rng(3);
  const auto a = random_dense(7, 5, rng);
  const auto b = random_dense(5, 4, rng);
  CHECK(max_abs_diff(matmul(a, b), schoolbook_matmul(a, b)) < 1e-12);
  CHECK(max_abs_diff(matmul_at_b(transpose(a), b), schoolbook_matmul(a, b)) <
        1e-12);
  CHECK(max_abs_diff(matmul_a_bt(a, transpose(b)), schoolbook_matmul(a, b)) <
        1e-12);
}

TEST_CASE("tracking allocator accounts for matrix storage") {
  const std::size_t before = memory::current_bytes();
  {
    DenseMatrix m(100, 100);
    CHECK(memory::current_bytes() >= before + 100 * 100 * sizeof(double));
  }
  CHECK(memory::current_bytes() == before);
}

TEST_CASE("csr_dense_matmul runtime is linear in k" * doctest::timeout(60)) {
  std::mt19937_64 rng(99);
  const auto a = random_csr(2000, 5000, 0.01, rng);
  std::vector<double> ks, times;
  for (std::size_t k : {64, 128, 256, 512}) {
    const auto p = random_dense(5000, k, rng);
    ks.push_back(static_cast<double>(k));
    times.push_back(rpnet::testing::median_seconds(
        5, [&] { (void)csr_dense_matmul(a, p); }));
  }
  const double slope = rpnet::testing::loglog_slope(ks, times);
  INFO("slope = " << slope);
  CHECK(slope >= 0.7);
  CHECK(slope <= 1.3);
}
