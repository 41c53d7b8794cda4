// SPDX-License-Identifier: MIT

#include <cmath>

#include "doctest.h"
#include "rpnet/error.hpp"
#include "rpnet/synth/synthetic.hpp"

using namespace rpnet;
using namespace rpnet::synth;

namespace {

SynthSpec base_spec() {
  SynthSpec s;
  s.n_total = 10000;
  s.d = 10000;
  s.rho = 1e-3;
  s.psi = 0.2;
  s.seed = 7;
  return s;
}

// Nearest centroid on the per-row mean of non-zero values, fitted on train.
double centroid_error(const SynthData& data) {
  auto row_mean = [](const CsrMatrix& m, std::size_t r) {
    const auto v = m.row_values(r);
    double s = 0;
    for (double x : v) s += x;
    return v.empty() ? 0.0 : s / static_cast<double>(v.size());
  };
  double c[2] = {0, 0}, n[2] = {0, 0};
  for (std::size_t r = 0; r < data.train.size(); ++r) {
    c[data.train.labels[r]] += row_mean(data.train.features, r);
    n[data.train.labels[r]] += 1;
  }
  c[0] /= n[0];
  c[1] /= n[1];
  std::size_t wrong = 0;
  for (std::size_t r = 0; r < data.test.size(); ++r) {
    const double m = row_mean(data.test.features, r);
    const std::uint32_t pred = std::abs(m - c[1]) < std::abs(m - c[0]) ? 1 : 0;
    wrong += pred != data.test.labels[r];
  }
  return static_cast<double>(wrong) / static_cast<double>(data.test.size());
}

}  // namespace

TEST_CASE("density matches rho within 3 sigma") {
  const auto all = generate_all(base_spec());
  const double cells = 1e4 * 1e4;
  const double sigma = std::sqrt(cells * 1e-3 * (1 - 1e-3));
  CHECK(std::abs(static_cast<double>(all.features.nnz()) - cells * 1e-3) <= 3 * sigma);
}

TEST_CASE("classes are balanced and the split is 80/20") {
  auto spec = base_spec();
  spec.n_total = 1001;
  const auto data = generate(spec);
  CHECK(data.train.size() == 801);
  CHECK(data.test.size() == 200);
  std::size_t ones = 0;
  for (auto l : data.train.labels) ones += l;
  for (auto l : data.test.labels) ones += l;
  CHECK(ones == 500);
  CHECK(data.train.features.cols() == spec.d);
  CHECK(data.test.features.cols() == spec.d);
}

TEST_CASE("significant features") {
  const auto spec = base_spec();
  const auto a = generate(spec);
  CHECK(a.significant.size() == 2000);
  CHECK(std::is_sorted(a.significant.begin(), a.significant.end()));
  CHECK(std::adjacent_find(a.significant.begin(), a.significant.end()) ==
        a.significant.end());
  CHECK(generate(spec).significant == a.significant);
  auto other = spec;
  other.seed = 8;
  CHECK(generate(other).significant != a.significant);
}

TEST_CASE("noise leaves the sparsity pattern unchanged") {
  auto spec = base_spec();
  spec.n_total = 2000;
  spec.sep_mean = 0;
  spec.sep_std = 0;
  const auto plain = generate_all(spec);
  spec.sep_mean = 3;
  spec.sep_std = 2;
  const auto noisy = generate_all(spec);
  CHECK(pattern_hash(plain.features) == pattern_hash(noisy.features));
  CHECK(content_hash(plain.features) != content_hash(noisy.features));
  // Class-0 rows are untouched.
  for (std::size_t r = 0; r < 2000; r += 2) {
    const auto a = plain.features.row_values(r);
    const auto b = noisy.features.row_values(r);
    REQUIRE(std::equal(a.begin(), a.end(), b.begin(), b.end()));
  }
}

TEST_CASE("a large shift is separable by nearest centroid") {
  auto spec = base_spec();
  spec.psi = 1.0;
  spec.sep_mean = 5.0;
  CHECK(centroid_error(generate(spec)) < 0.05);
}

TEST_CASE("no shift leaves classes indistinguishable") {
  auto spec = base_spec();
  spec.sep_mean = 0.0;
  spec.sep_std = 0.0;
  const double err = centroid_error(generate(spec));
  CHECK(err > 0.4);
  CHECK(err < 0.6);
}

TEST_CASE("low density warns") {
  auto spec = base_spec();
  spec.n_total = 10;
  spec.rho = 1e-5;
  CHECK(generate(spec).warnings.size() == 1);
}

TEST_CASE("invalid specs") {
  auto spec = base_spec();
  spec.rho = 1.0;
  CHECK_THROWS_AS(generate(spec), InvalidArgument);
  spec = base_spec();
  spec.psi = 0.0;
  CHECK_THROWS_AS(generate(spec), InvalidArgument);
}

TEST_CASE("grid presets") {
  const auto rho = grid_preset("rho_grid");
  REQUIRE(rho.size() == 5);
  CHECK(rho.front().rho == 1e-6);
  CHECK(rho.back().rho == 1e-4);
  for (const auto& s : rho) {
    CHECK(s.psi == 0.2);
    CHECK(s.d == 1000000);
    CHECK(s.n_total == 1250000);
  }
  const auto psi = grid_preset("psi_grid");
  CHECK(psi.front().psi == 0.01);
  CHECK(psi.back().psi == 0.2);
  for (const auto& s : psi) CHECK(s.rho == 1e-4);

  const auto small = grid_preset("rho_grid", 100);
  CHECK(small.front().d == 10000);
  CHECK(small.front().n_total == 12500);
  CHECK(small.front().rho == doctest::Approx(1e-4));
  CHECK(small.front().rho * small.front().d ==
        doctest::Approx(rho.front().rho * rho.front().d));

  CHECK_THROWS_AS(grid_preset("mnist"), InvalidArgument);
  CHECK_THROWS_AS(grid_preset("rho_grid", 100000), InvalidArgument);
}

TEST_CASE("spec json round trip and sidecar") {
  auto spec = base_spec();
  spec.n_total = 20;
  const auto back = SynthSpec::from_json(spec.to_json());
  CHECK(back.to_json() == spec.to_json());
  const auto data = generate(spec);
  const auto side = data.sidecar(spec);
  CHECK(side["significant_feature_ids"].size() == data.significant.size());
  CHECK(side["spec"]["psi"] == 0.2);
}
