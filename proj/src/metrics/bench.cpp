// SPDX-License-Identifier: MIT

#include "rpnet/metrics/bench.hpp"

#include <algorithm>
#include <chrono>
#include <sstream>

#include "rpnet/error.hpp"
#include "rpnet/rp/rng.hpp"
#include "rpnet/sparse/ops.hpp"

namespace rpnet::metrics {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

struct Timing {
  double gen = 0.0;
  double proj = 0.0;
  std::size_t nnz = 0;
};

// One repeat: P is produced in column slices small enough for the byte cap
// and each slice is consumed before the next is generated.
Timing run_once(const CsrMatrix& a, const rp::RpSchemeSpec& spec,
                std::size_t slice_bytes) {
  Timing t;
  const bool sparse = rp::is_sparse_scheme(spec.kind);
  std::size_t width = spec.k;
  if (!sparse) {
    const std::size_t per_col = spec.d * sizeof(double);
    width = std::clamp<std::size_t>(slice_bytes / std::max<std::size_t>(per_col, 1),
                                    1, spec.k);
  } else if (spec.kind == rp::Scheme::Achlioptas) {
    const std::size_t per_col = spec.d * 12 / 3 + 1;
    width = std::clamp<std::size_t>(slice_bytes / per_col, 1, spec.k);
  }
  for (std::size_t b = 0; b < spec.k; b += width) {
    const std::size_t e = std::min(spec.k, b + width);
    auto start = Clock::now();
    const rp::RpMatrix p = rp::gen_columns(spec, b, e);
    t.gen += seconds_since(start);
    t.nnz += p.nnz();
    start = Clock::now();
    if (sparse) {
      const CsrMatrix r = csr_csr_matmul(a, p.sparse());
      t.proj += seconds_since(start);
      (void)r;
    } else {
      const DenseMatrix r = csr_dense_matmul(a, p.dense());
      t.proj += seconds_since(start);
      (void)r;
    }
  }
  return t;
}

}  // namespace

const BenchRow& BenchReport::at(rp::Scheme scheme, std::size_t k) const {
  for (const auto& r : rows) {
    if (r.scheme == scheme && r.k == k) return r;
  }
  throw InvalidArgument("bench report has no cell for " +
                        std::string(rp::to_string(scheme)) + ", k = " +
                        std::to_string(k));
}

std::string BenchReport::to_csv() const {
  std::ostringstream out;
  out << "scheme,d,k,n,density,gen_time,proj_time,nnz_p\n";
  out.precision(9);
  for (const auto& r : rows) {
    out << rp::to_string(r.scheme) << ',' << r.d << ',' << r.k << ',' << r.n
        << ',' << r.density << ',' << r.gen_time << ',' << r.proj_time << ','
        << r.nnz_p << '\n';
  }
  return out.str();
}

nlohmann::json BenchReport::to_json() const {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : rows) {
    arr.push_back({{"scheme", rp::to_string(r.scheme)},
                   {"d", r.d},
                   {"k", r.k},
                   {"n", r.n},
                   {"density", r.density},
                   {"gen_time", r.gen_time},
                   {"proj_time", r.proj_time},
                   {"nnz_p", r.nnz_p}});
  }
  return {{"rows", arr}};
}

CsrMatrix random_fixture(std::size_t n, std::size_t d, double density,
                         std::uint64_t seed) {
  if (!(density > 0.0 && density <= 1.0)) {
    throw InvalidArgument("random_fixture: density must lie in (0, 1]");
  }
  CsrBuilder b(d, static_cast<std::size_t>(static_cast<double>(n) *
                                            static_cast<double>(d) * density * 1.1) +
                      16);
  for (std::size_t r = 0; r < n; ++r) {
    rp::RngStream rng(seed, r);
    std::uint64_t c = rng.geometric_gap(density);
    while (c < d) {
      b.push(static_cast<Index>(c), rng.normal());
      const std::uint64_t gap = rng.geometric_gap(density);
      if (gap >= d) break;
      c += gap + 1;
    }
    b.finish_row();
  }
  return std::move(b).build();
}

BenchReport bench_schemes(const CsrMatrix& a, const BenchConfig& cfg) {
  if (cfg.repeats < 3) throw InvalidArgument("bench: repeats must be >= 3");
  if (a.cols() != cfg.d) throw DimensionMismatch("bench: data has wrong d");
  BenchReport rep;
  for (rp::Scheme scheme : cfg.schemes) {
    for (std::size_t k : cfg.k_list) {
      rp::RpSchemeSpec spec;
      spec.kind = scheme;
      spec.d = cfg.d;
      spec.k = k;
      spec.seed = cfg.seed;
      spec.srht_n_hint = a.rows();
      std::vector<double> gen, proj;
      std::size_t nnz = 0;
      for (std::size_t r = 0; r < cfg.repeats; ++r) {
        const Timing t = run_once(a, spec, cfg.slice_bytes);
        gen.push_back(t.gen);
        proj.push_back(t.proj);
        nnz = t.nnz;
      }
      rep.rows.push_back({scheme, cfg.d, k, a.rows(), density(a), median(gen),
                          median(proj), nnz});
    }
  }
  return rep;
}

BenchReport bench_schemes(const BenchConfig& cfg) {
  if (cfg.repeats < 3) throw InvalidArgument("bench: repeats must be >= 3");
  return bench_schemes(random_fixture(cfg.n, cfg.d, cfg.density, cfg.seed), cfg);
}

}  // namespace rpnet::metrics
