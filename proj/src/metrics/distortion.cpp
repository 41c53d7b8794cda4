// SPDX-License-Identifier: MIT

#include "rpnet/metrics/distortion.hpp"

#include <cmath>

#include "rpnet/error.hpp"
#include "rpnet/projection/engine.hpp"
#include "rpnet/rp/rng.hpp"

namespace rpnet::metrics {
namespace {

constexpr double kMinDistance = 1e-12;

double sq_distance(const DenseMatrix& m, std::size_t i, std::size_t j) {
  const auto a = m.row(i);
  const auto b = m.row(j);
  double s = 0.0;
  for (std::size_t c = 0; c < a.size(); ++c) {
    const double d = a[c] - b[c];
    s += d * d;
  }
  return s;
}

double sq_distance(const CsrMatrix& m, std::size_t i, std::size_t j) {
  const auto ai = m.row_indices(i);
  const auto av = m.row_values(i);
  const auto bi = m.row_indices(j);
  const auto bv = m.row_values(j);
  std::size_t p = 0, q = 0;
  double s = 0.0;
  while (p < ai.size() || q < bi.size()) {
    double d;
    if (q == bi.size() || (p < ai.size() && ai[p] < bi[q])) {
      d = av[p++];
    } else if (p == ai.size() || bi[q] < ai[p]) {
      d = -bv[q++];
    } else {
      d = av[p++] - bv[q++];
    }
    s += d * d;
  }
  return s;
}

template <class Matrix>
DistortionReport pairwise_impl(const Matrix& a, const DenseMatrix& r,
                               std::size_t max_pairs, std::uint64_t seed) {
  const std::size_t n = a.rows();
  if (n < 2) throw InvalidArgument("pairwise_distortion: need at least 2 rows");
  if (r.rows() != n) {
    throw DimensionMismatch("pairwise_distortion: row counts differ");
  }
  DistortionReport rep;
  double sum = 0.0;
  auto visit = [&](std::size_t i, std::size_t j) {
    const double orig = sq_distance(a, i, j);
    if (std::sqrt(orig) < kMinDistance) {
      ++rep.skipped;
      return;
    }
    const double dist = std::abs(std::sqrt(sq_distance(r, i, j) / orig) - 1.0);
    ++rep.n_pairs;
    sum += dist;
    rep.max_distortion = std::max(rep.max_distortion, dist);
    const auto b = static_cast<std::size_t>(dist / DistortionReport::kBucketWidth);
    ++rep.histogram[std::min(b, DistortionReport::kBuckets)];
  };

  const double all = 0.5 * static_cast<double>(n) * static_cast<double>(n - 1);
  if (all <= static_cast<double>(max_pairs)) {
    rep.exhaustive = true;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) visit(i, j);
    }
  } else {
    rp::RngStream rng(seed, rp::streams::kPairs);
    for (std::size_t t = 0; t < max_pairs; ++t) {
      const std::size_t i = rng.below(n);
      std::size_t j = rng.below(n - 1);
      if (j >= i) ++j;
      visit(i, j);
    }
  }
  rep.mean_distortion = rep.n_pairs ? sum / static_cast<double>(rep.n_pairs) : 0.0;
  return rep;
}

// xᵀA for a dense x of length rows(A).
std::vector<double> left_multiply(const std::vector<double>& x,
                                  const CsrMatrix& a) {
  std::vector<double> out(a.cols(), 0.0);
  for (std::size_t r = 0; r < a.rows(); ++r) {
    const auto idx = a.row_indices(r);
    const auto val = a.row_values(r);
    for (std::size_t q = 0; q < idx.size(); ++q) out[idx[q]] += x[r] * val[q];
  }
  return out;
}

std::vector<double> left_multiply(const std::vector<double>& x,
                                  const DenseMatrix& a) {
  std::vector<double> out(a.cols(), 0.0);
  for (std::size_t r = 0; r < a.rows(); ++r) {
    const auto row = a.row(r);
    for (std::size_t c = 0; c < row.size(); ++c) out[c] += x[r] * row[c];
  }
  return out;
}

double sq_norm(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return s;
}

bool has_nonzero(const CsrMatrix& a) {
  for (double v : a.values()) {
    if (v != 0.0) return true;
  }
  return false;
}

bool has_nonzero(const DenseMatrix& a) {
  for (double v : a.data()) {
    if (v != 0.0) return true;
  }
  return false;
}

DenseMatrix times(const CsrMatrix& a, const rp::RpMatrix& s) {
  return projection::multiply(a, s);
}

DenseMatrix times(const DenseMatrix& a, const rp::RpMatrix& s) {
  return matmul(a, s.to_dense());
}

template <class Matrix>
double subspace_impl(const Matrix& a, const rp::RpMatrix& s, std::size_t trials,
                     std::uint64_t seed) {
  if (trials == 0) throw InvalidArgument("subspace_distortion_mc: trials = 0");
  if (s.rows() != a.cols()) {
    throw DimensionMismatch("subspace_distortion_mc: S.rows != A.cols");
  }
  if (!has_nonzero(a)) {
    throw InvalidArgument("subspace_distortion_mc: A is all zero");
  }
  const DenseMatrix as = times(a, s);
  const std::size_t n = a.rows();
  double worst = 0.0;
  std::vector<double> x(n);
  for (std::size_t t = 0; t < trials; ++t) {
    rp::RngStream rng(seed, t);
    for (;;) {
      double norm = 0.0;
      for (double& v : x) {
        v = rng.normal();
        norm += v * v;
      }
      norm = std::sqrt(norm);
      for (double& v : x) v /= norm;
      const double base = sq_norm(left_multiply(x, a));
      if (std::sqrt(base) < kMinDistance) continue;  // x in the left null space
      const double proj = sq_norm(left_multiply(x, as));
      worst = std::max(worst, std::abs(proj / base - 1.0));
      break;
    }
  }
  return worst;
}

}  // namespace

nlohmann::json DistortionReport::to_json() const {
  return {{"n_pairs", n_pairs},
          {"skipped", skipped},
          {"exhaustive", exhaustive},
          {"max_distortion", max_distortion},
          {"mean_distortion", mean_distortion},
          {"bucket_width", kBucketWidth},
          {"histogram", histogram}};
}

DistortionReport pairwise_distortion(const CsrMatrix& a, const DenseMatrix& r,
                                     std::size_t max_pairs, std::uint64_t seed) {
  return pairwise_impl(a, r, max_pairs, seed);
}

DistortionReport pairwise_distortion(const DenseMatrix& a, const DenseMatrix& r,
                                     std::size_t max_pairs, std::uint64_t seed) {
  return pairwise_impl(a, r, max_pairs, seed);
}

double subspace_distortion_mc(const CsrMatrix& a, const rp::RpMatrix& s,
                              std::size_t trials, std::uint64_t seed) {
  return subspace_impl(a, s, trials, seed);
}

double subspace_distortion_mc(const DenseMatrix& a, const rp::RpMatrix& s,
                              std::size_t trials, std::uint64_t seed) {
  return subspace_impl(a, s, trials, seed);
}

}  // namespace rpnet::metrics
