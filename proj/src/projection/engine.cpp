// SPDX-License-Identifier: MIT

#include "rpnet/projection/engine.hpp"

#include <atomic>
#include <cmath>
#include <string>
#include <unistd.h>

#include "rpnet/error.hpp"
#include "rpnet/projection/rpdb.hpp"
#include "rpnet/sparse/ops.hpp"

namespace rpnet::projection {
namespace {

namespace fs = std::filesystem;

constexpr std::size_t kCsrEntryBytes = sizeof(double) + sizeof(Index);

double expected_density(const rp::RpSchemeSpec& spec) {
  switch (spec.kind) {
    case rp::Scheme::Gaussian:
    case rp::Scheme::Srht:
      return 1.0;
    case rp::Scheme::Achlioptas:
      return 1.0 / 3.0;
    case rp::Scheme::Li:
      return 1.0 / spec.li_s_value();
    case rp::Scheme::CountSketch:
      return 1.0 / static_cast<double>(spec.k);
  }
  return 1.0;
}

std::size_t slice_p_bytes(const rp::RpSchemeSpec& spec, std::size_t width) {
  const double cells = static_cast<double>(spec.d) * static_cast<double>(width);
  if (!rp::is_sparse_scheme(spec.kind)) {
    return static_cast<std::size_t>(cells * sizeof(double));
  }
  return static_cast<std::size_t>(cells * expected_density(spec) *
                                  kCsrEntryBytes) +
         (spec.d + 1) * sizeof(std::size_t);
}

std::size_t slice_a_bytes(const CsrMatrix& a, std::size_t begin,
                          std::size_t end) {
  const auto off = a.row_offsets();
  return (off[end] - off[begin]) * kCsrEntryBytes +
         (end - begin + 1) * sizeof(std::size_t);
}

fs::path make_spill_dir(const ProjectionPlan& plan) {
  static std::atomic<unsigned> counter{0};
  fs::path dir = plan.spill_dir;
  if (dir.empty()) {
    dir = fs::temp_directory_path() /
          ("rpnet-spill-" + std::to_string(::getpid()) + "-" +
           std::to_string(counter++));
  }
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create spill directory " + dir.string());
  return dir;
}

fs::path block_path(const fs::path& dir, std::size_t i, std::size_t j) {
  return dir / ("r_" + std::to_string(i) + "_" + std::to_string(j) + ".rpdb");
}

fs::path column_path(const fs::path& dir, std::size_t j) {
  return dir / ("r_col_" + std::to_string(j) + ".rpdb");
}

void remove_quietly(const fs::path& p) {
  std::error_code ec;
  fs::remove(p, ec);
}

void copy_block(DenseMatrix& out, const DenseMatrix& block, std::size_t row0,
                std::size_t col0) {
  for (std::size_t r = 0; r < block.rows(); ++r) {
    const auto src = block.row(r);
    auto dst = out.row(row0 + r);
    std::copy(src.begin(), src.end(), dst.begin() + col0);
  }
}

}  // namespace

void ProjectionPlan::validate() const {
  spec.validate();
  if (h < 1) throw InvalidArgument("projection plan: h must be >= 1");
  if (v < 1) throw InvalidArgument("projection plan: v must be >= 1");
  if (v > spec.k) throw InvalidArgument("projection plan: v must be <= k");
}

DenseMatrix multiply(const CsrMatrix& a, const rp::RpMatrix& p) {
  if (p.is_sparse()) return csr_csr_matmul_dense(a, p.sparse());
  return csr_dense_matmul(a, p.dense());
}

std::size_t slice_triple_bytes(const CsrMatrix& a, const rp::RpSchemeSpec& spec,
                               std::size_t h, std::size_t v) {
  std::size_t a_max = 0;
  std::size_t rows_max = 0;
  for (auto [b, e] : split_ranges(std::max<std::size_t>(a.rows(), 1), h)) {
    if (b == e || e > a.rows()) continue;
    a_max = std::max(a_max, h == 1 ? 0 : slice_a_bytes(a, b, e));
    rows_max = std::max(rows_max, e - b);
  }
  const std::size_t width = split_ranges(spec.k, v).front().second;
  return a_max + slice_p_bytes(spec, width) + rows_max * width * sizeof(double);
}

std::pair<std::size_t, std::size_t> suggest_slicing(
    const CsrMatrix& a, const rp::RpSchemeSpec& spec, std::size_t budget) {
  const std::size_t n = std::max<std::size_t>(a.rows(), 1);
  std::pair<std::size_t, std::size_t> best{0, 0};
  for (std::size_t v = 1; v <= spec.k; v = v < spec.k ? std::min(spec.k, v * 2) : v + 1) {
    // Larger h only shrinks A_i and R_ij; find the smallest that fits.
    std::size_t lo = 1, hi = n;
    if (slice_triple_bytes(a, spec, hi, v) > budget) continue;
    while (lo < hi) {
      const std::size_t mid = lo + (hi - lo) / 2;
      if (slice_triple_bytes(a, spec, mid, v) <= budget) {
        hi = mid;
      } else {
        lo = mid + 1;
      }
    }
    if (best.first == 0 || lo * v < best.first * best.second) best = {lo, v};
    if (lo == 1) break;
  }
  if (best.first == 0) {
    throw InvalidArgument("projection: memory budget of " +
                          std::to_string(budget) +
                          " bytes cannot hold a single slice triple");
  }
  return best;
}

double projection_matrix_bytes(const rp::RpSchemeSpec& spec) {
  const double cells = static_cast<double>(spec.d) * static_cast<double>(spec.k);
  if (!rp::is_sparse_scheme(spec.kind)) return cells * 4.0;
  return cells * expected_density(spec) * 8.0;
}

DenseMatrix project(const CsrMatrix& a, const ProjectionPlan& plan,
                    ProjectionReport* report) {
  plan.validate();
  if (a.cols() != plan.spec.d) {
    throw DimensionMismatch("project: A has " + std::to_string(a.cols()) +
                            " columns but the projection expects d = " +
                            std::to_string(plan.spec.d));
  }
  ProjectionReport local;
  ProjectionReport& rep = report ? *report : local;
  rep = ProjectionReport{};

  const std::size_t n = a.rows();
  const std::size_t k = plan.spec.k;
  const std::size_t h = std::min(plan.h, std::max<std::size_t>(n, 1));
  const auto row_ranges = split_ranges(std::max<std::size_t>(n, 1), h);
  const auto col_ranges = split_ranges(k, plan.v);

  bool spill = plan.spill == SpillMode::Always;
  if (plan.spill == SpillMode::Auto && plan.memory_budget) {
    const std::size_t results = n * k * sizeof(double);
    spill = results + slice_triple_bytes(a, plan.spec, h, plan.v) >
            *plan.memory_budget;
  }

  DenseMatrix out(n, k);
  if (n == 0) return out;

  // Count Sketch needs no materialized P when it is not sliced.
  if (plan.spec.kind == rp::Scheme::CountSketch && plan.v == 1 && !spill) {
    rep.streaming_count_sketch = true;
    for (auto [b, e] : row_ranges) {
      if (b == e || e > n) continue;
      if (h == 1) {
        out = rp::apply_count_sketch_streaming(a, k, plan.spec.seed);
      } else {
        copy_block(out, rp::apply_count_sketch_streaming(row_slice(a, b, e), k,
                                                     plan.spec.seed),
                   b, 0);
      }
      ++rep.blocks;
    }
    return out;
  }

  fs::path dir;
  if (spill) {
    dir = make_spill_dir(plan);
    rep.spilled = true;
    rep.spill_dir = dir;
  }

  for (std::size_t j = 0; j < col_ranges.size(); ++j) {
    const auto [cb, ce] = col_ranges[j];
    if (cb == ce) continue;
    const rp::RpMatrix p = rp::gen_columns(plan.spec, cb, ce);
    const std::size_t p_bytes = p.is_sparse() ? p.sparse().storage_bytes()
                                              : p.dense().storage_bytes();
    std::vector<std::size_t> written;
    for (std::size_t i = 0; i < row_ranges.size(); ++i) {
      const auto [rb, re] = row_ranges[i];
      if (rb == re || re > n) continue;
      DenseMatrix r;
      std::size_t a_bytes = 0;
      if (h == 1) {
        r = multiply(a, p);
      } else {
        const CsrMatrix ai = row_slice(a, rb, re);
        a_bytes = ai.storage_bytes();
        r = multiply(ai, p);
      }
      rep.max_triple_bytes =
          std::max(rep.max_triple_bytes, a_bytes + p_bytes + r.storage_bytes());
      ++rep.blocks;
      if (spill) {
        save_dense(r, nullptr, block_path(dir, i, j), RpdbPrecision::Float64);
        written.push_back(i);
      } else {
        copy_block(out, r, rb, cb);
      }
    }
    if (spill) {
      // R_.j = [R_1j; ...; R_hj], read back and saved as one column block.
      DenseMatrix column(n, ce - cb);
      for (std::size_t i : written) {
        const auto block = load_dense(block_path(dir, i, j)).data;
        copy_block(column, block, row_ranges[i].first, 0);
        if (!plan.keep_spill_files) remove_quietly(block_path(dir, i, j));
      }
      save_dense(column, nullptr, column_path(dir, j), RpdbPrecision::Float64);
    }
  }

  if (spill) {
    for (std::size_t j = 0; j < col_ranges.size(); ++j) {
      const auto [cb, ce] = col_ranges[j];
      if (cb == ce) continue;
      copy_block(out, load_dense(column_path(dir, j)).data, 0, cb);
      if (!plan.keep_spill_files) remove_quietly(column_path(dir, j));
    }
    if (!plan.keep_spill_files && plan.spill_dir.empty()) {
      std::error_code ec;
      fs::remove(dir, ec);
    }
  }
  return out;
}

}  // namespace rpnet::projection
