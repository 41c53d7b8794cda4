// SPDX-License-Identifier: MIT

#include "rpnet/rp/schemes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "rpnet/error.hpp"
#include "rpnet/rp/fwht.hpp"
#include "rpnet/rp/rng.hpp"
#include "rpnet/sparse/ops.hpp"

namespace rpnet::rp {
namespace {

struct Triplet {
  Index row;
  Index col;
  double value;
};

// Buckets column-generated entries by row; within a row the columns arrive
// in increasing order because columns are generated in order.
CsrMatrix assemble_rows(std::size_t d, std::size_t width,
                        const std::vector<Triplet>& entries) {
  Buffer<std::size_t> offsets(d + 1, 0);
  for (const auto& t : entries) ++offsets[t.row + 1];
  for (std::size_t r = 0; r < d; ++r) offsets[r + 1] += offsets[r];
  Buffer<Index> cols(entries.size());
  Buffer<double> vals(entries.size());
  std::vector<std::size_t> cursor(offsets.begin(), offsets.end() - 1);
  for (const auto& t : entries) {
    const std::size_t p = cursor[t.row]++;
    cols[p] = t.col;
    vals[p] = t.value;
  }
  return CsrMatrix(d, width, std::move(offsets), std::move(cols),
                   std::move(vals));
}

std::vector<RngStream> column_streams(std::uint64_t seed, std::size_t begin,
                                      std::size_t end) {
  std::vector<RngStream> s;
  s.reserve(end - begin);
  for (std::size_t c = begin; c < end; ++c) s.emplace_back(seed, c);
  return s;
}

DenseMatrix gaussian_columns(const RpSchemeSpec& spec, std::size_t begin,
                             std::size_t end) {
  const std::size_t w = end - begin;
  const double scale = 1.0 / std::sqrt(static_cast<double>(spec.k));
  auto streams = column_streams(spec.seed, begin, end);
  DenseMatrix out(spec.d, w);
  for (std::size_t r = 0; r < spec.d; ++r) {
    double* dst = out.row(r).data();
    for (std::size_t c = 0; c < w; ++c) dst[c] = streams[c].normal() * scale;
  }
  return out;
}

CsrMatrix achlioptas_columns(const RpSchemeSpec& spec, std::size_t begin,
                             std::size_t end) {
  const std::size_t w = end - begin;
  const double mag = std::sqrt(3.0 / static_cast<double>(spec.k));
  auto streams = column_streams(spec.seed, begin, end);
  CsrBuilder b(w, spec.d * w / 3 + 16);
  for (std::size_t r = 0; r < spec.d; ++r) {
    for (std::size_t c = 0; c < w; ++c) {
      const double u = streams[c].uniform();
      if (u < 1.0 / 6.0) {
        b.push(static_cast<Index>(c), mag);
      } else if (u < 1.0 / 3.0) {
        b.push(static_cast<Index>(c), -mag);
      }
    }
    b.finish_row();
  }
  return std::move(b).build();
}

CsrMatrix li_columns(const RpSchemeSpec& spec, std::size_t begin,
                     std::size_t end) {
  const double s = spec.li_s_value();
  const double p = 1.0 / s;
  const double mag = std::sqrt(s / static_cast<double>(spec.k));
  std::vector<Triplet> entries;
  entries.reserve(static_cast<std::size_t>(
      static_cast<double>(spec.d * (end - begin)) * p * 1.1 + 16));
  for (std::size_t c = begin; c < end; ++c) {
    RngStream rng(spec.seed, c);
    std::uint64_t row = rng.geometric_gap(p);
    while (row < spec.d) {
      const double sign = (rng.next_u64() >> 63) ? -1.0 : 1.0;
      entries.push_back({static_cast<Index>(row), static_cast<Index>(c - begin),
                         sign * mag});
      const std::uint64_t gap = rng.geometric_gap(p);
      if (gap >= spec.d) break;
      row += gap + 1;
    }
  }
  return assemble_rows(spec.d, end - begin, entries);
}

std::vector<double> srht_signs(const RpSchemeSpec& spec, std::size_t t) {
  const RngStream rng(spec.seed, streams::kSigns);
  std::vector<double> signs(t);
  for (std::size_t r = 0; r < t; ++r) {
    signs[r] = (rng.at(r) >> 63) ? -1.0 : 1.0;
  }
  return signs;
}

DenseMatrix srht_columns(const RpSchemeSpec& spec, std::size_t begin,
                         std::size_t end) {
  const std::size_t t = spec.srht_padded_dim();
  const double q = spec.srht_q_value();
  const double s_scale = 1.0 / std::sqrt(q);
  const double out_scale =
      1.0 / std::sqrt(static_cast<double>(spec.k) * static_cast<double>(t));
  const auto signs = srht_signs(spec, t);
  DenseMatrix out(spec.d, end - begin);
  std::vector<double> col(t);
  for (std::size_t c = begin; c < end; ++c) {
    std::fill(col.begin(), col.end(), 0.0);
    RngStream rng(spec.seed, c);
    std::uint64_t row = rng.geometric_gap(q);
    while (row < t) {
      col[row] = rng.normal() * s_scale;
      const std::uint64_t gap = rng.geometric_gap(q);
      if (gap >= t) break;
      row += gap + 1;
    }
    fwht_inplace(col);
    for (std::size_t r = 0; r < spec.d; ++r) {
      out(r, c - begin) = signs[r] * col[r] * out_scale;
    }
  }
  return out;
}

CsrMatrix count_sketch_columns(const RpSchemeSpec& spec, std::size_t begin,
                               std::size_t end) {
  Buffer<std::size_t> offsets(spec.d + 1, 0);
  Buffer<Index> cols;
  Buffer<double> vals;
  const bool full = begin == 0 && end == spec.k;
  if (full) {
    cols.reserve(spec.d);
    vals.reserve(spec.d);
  }
  for (std::size_t r = 0; r < spec.d; ++r) {
    const auto cell = count_sketch_cell(spec.seed, spec.k, r);
    if (cell.column >= begin && cell.column < end) {
      cols.push_back(static_cast<Index>(cell.column - begin));
      vals.push_back(cell.sign);
    }
    offsets[r + 1] = cols.size();
  }
  return CsrMatrix(spec.d, end - begin, std::move(offsets), std::move(cols),
                   std::move(vals));
}

}  // namespace

std::string_view to_string(Scheme s) noexcept {
  switch (s) {
    case Scheme::Gaussian:
      return "gaussian";
    case Scheme::Achlioptas:
      return "achlioptas";
    case Scheme::Li:
      return "li";
    case Scheme::Srht:
      return "srht";
    case Scheme::CountSketch:
      return "countsketch";
  }
  return "unknown";
}

Scheme parse_scheme(std::string_view name) {
  for (Scheme s : {Scheme::Gaussian, Scheme::Achlioptas, Scheme::Li,
                   Scheme::Srht, Scheme::CountSketch}) {
    if (name == to_string(s)) return s;
  }
  throw InvalidArgument("unknown projection scheme '" + std::string(name) +
                        "'");
}

bool is_sparse_scheme(Scheme s) noexcept {
  return s == Scheme::Achlioptas || s == Scheme::Li ||
         s == Scheme::CountSketch;
}

void RpSchemeSpec::validate() const {
  if (d < 1) throw InvalidArgument("projection: d must be >= 1");
  if (k < 1) throw InvalidArgument("projection: k must be >= 1");
  if (d > std::numeric_limits<Index>::max() ||
      k > std::numeric_limits<Index>::max()) {
    throw InvalidArgument("projection: dimension exceeds index range");
  }
  if (li_s && !(*li_s >= 1.0)) {
    throw InvalidArgument("projection: Li's s must be >= 1");
  }
  if (srht_q && !(*srht_q > 0.0 && *srht_q <= 1.0)) {
    throw InvalidArgument("projection: SRHT q must lie in (0, 1]");
  }
}

double RpSchemeSpec::li_s_value() const {
  return li_s.value_or(std::sqrt(static_cast<double>(d)));
}

std::size_t RpSchemeSpec::srht_padded_dim() const {
  std::size_t t = 1;
  while (t < d) t *= 2;
  return t;
}

double RpSchemeSpec::srht_q_value() const {
  if (srht_q) return *srht_q;
  const double t = static_cast<double>(srht_padded_dim());
  const double n = static_cast<double>(srht_n_hint == 0 ? d : srht_n_hint);
  const double ln = std::log(std::max(n, 1.0));
  return std::min(1.0, std::max(ln * ln, 8.0) / t);
}

std::size_t RpMatrix::rows() const noexcept {
  return std::visit([](const auto& m) { return m.rows(); }, storage);
}

std::size_t RpMatrix::cols() const noexcept {
  return std::visit([](const auto& m) { return m.cols(); }, storage);
}

std::size_t RpMatrix::nnz() const noexcept {
  if (is_sparse()) return sparse().nnz();
  const auto data = dense().data();
  return static_cast<std::size_t>(
      std::count_if(data.begin(), data.end(), [](double v) { return v != 0.0; }));
}

DenseMatrix RpMatrix::to_dense() const {
  return is_sparse() ? sparse().to_dense() : dense();
}

RpMatrix gen_columns(const RpSchemeSpec& spec, std::size_t begin,
                     std::size_t end) {
  spec.validate();
  if (begin > end || end > spec.k) {
    throw InvalidArgument("projection: column range out of bounds");
  }
  RpMatrix m{spec, begin, DenseMatrix()};
  switch (spec.kind) {
    case Scheme::Gaussian:
      m.storage = gaussian_columns(spec, begin, end);
      break;
    case Scheme::Achlioptas:
      m.storage = achlioptas_columns(spec, begin, end);
      break;
    case Scheme::Li:
      m.storage = li_columns(spec, begin, end);
      break;
    case Scheme::Srht:
      m.storage = srht_columns(spec, begin, end);
      break;
    case Scheme::CountSketch:
      m.storage = count_sketch_columns(spec, begin, end);
      break;
  }
  return m;
}

RpMatrix generate(const RpSchemeSpec& spec) {
  return gen_columns(spec, 0, spec.k);
}

namespace {
RpMatrix generate_checked(const RpSchemeSpec& spec, Scheme expected) {
  if (spec.kind != expected) {
    throw InvalidArgument("projection: spec kind does not match generator");
  }
  return generate(spec);
}
}  // namespace

RpMatrix gen_gaussian(const RpSchemeSpec& spec) {
  return generate_checked(spec, Scheme::Gaussian);
}
RpMatrix gen_achlioptas(const RpSchemeSpec& spec) {
  return generate_checked(spec, Scheme::Achlioptas);
}
RpMatrix gen_li(const RpSchemeSpec& spec) {
  return generate_checked(spec, Scheme::Li);
}
RpMatrix gen_srht(const RpSchemeSpec& spec) {
  return generate_checked(spec, Scheme::Srht);
}
RpMatrix gen_count_sketch(const RpSchemeSpec& spec) {
  return generate_checked(spec, Scheme::CountSketch);
}

RpMatrix gen_slice(const RpSchemeSpec& spec, std::size_t j, std::size_t v) {
  if (!(j < v && v <= spec.k)) {
    throw InvalidArgument("projection: slice index requires j < v <= k");
  }
  const auto [b, e] = split_ranges(spec.k, v)[j];
  return gen_columns(spec, b, e);
}

DenseMatrix srht_from_parts(std::size_t d, std::span<const double> signs,
                            const DenseMatrix& s) {
  const std::size_t t = signs.size();
  if (!is_power_of_two(t) || s.rows() != t || d > t || s.cols() == 0) {
    throw InvalidArgument("srht_from_parts: inconsistent shapes");
  }
  const std::size_t k = s.cols();
  const double scale =
      1.0 / std::sqrt(static_cast<double>(k) * static_cast<double>(t));
  DenseMatrix out(d, k);
  std::vector<double> col(t);
  for (std::size_t c = 0; c < k; ++c) {
    for (std::size_t r = 0; r < t; ++r) col[r] = s(r, c);
    fwht_inplace(col);
    for (std::size_t r = 0; r < d; ++r) out(r, c) = signs[r] * col[r] * scale;
  }
  return out;
}

CountSketchCell count_sketch_cell(std::uint64_t seed, std::size_t k,
                                  std::size_t row) noexcept {
  const RngStream rng(seed, streams::kCountSketch);
  const std::uint64_t col = RngStream::scale_below(rng.at(2 * row), k);
  const double sign = (rng.at(2 * row + 1) >> 63) ? -1.0 : 1.0;
  return {static_cast<std::size_t>(col), sign};
}

DenseMatrix apply_count_sketch_streaming(const CsrMatrix& a, std::size_t k,
                                         std::uint64_t seed) {
  if (k == 0) throw InvalidArgument("count sketch: k must be >= 1");
  DenseMatrix out(a.rows(), k);
  for (std::size_t r = 0; r < a.rows(); ++r) {
    double* dst = out.row(r).data();
    const auto idx = a.row_indices(r);
    const auto val = a.row_values(r);
    for (std::size_t q = 0; q < idx.size(); ++q) {
      const auto cell = count_sketch_cell(seed, k, idx[q]);
      dst[cell.column] += val[q] * cell.sign;
    }
  }
  return out;
}

}  // namespace rpnet::rp
