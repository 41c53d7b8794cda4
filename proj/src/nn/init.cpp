// SPDX-License-Identifier: MIT

#include "rpnet/nn/init.hpp"

#include <charconv>
#include <cmath>

#include "rpnet/error.hpp"
#include "rpnet/rp/rng.hpp"

namespace rpnet::nn {
namespace {

void check_shape(std::size_t f_in, std::size_t f_out) {
  if (f_in == 0 || f_out == 0) {
    throw InvalidArgument("init: weight shape must be non-empty");
  }
}

DenseMatrix uniform(std::size_t f_in, std::size_t f_out, double a,
                    std::uint64_t seed) {
  DenseMatrix w(f_in, f_out);
  rp::RngStream s(seed, 0);
  for (double& v : w.data()) v = a * (2.0 * s.uniform() - 1.0);
  return w;
}

}  // namespace

void InitScheme::validate() const {
  if (kind == InitKind::RpInit && rp_scheme == rp::Scheme::CountSketch &&
      !(cs_gamma > 0.0)) {
    throw InvalidArgument("count sketch init scale must be > 0");
  }
}

std::string to_string(const InitScheme& s) {
  switch (s.kind) {
    case InitKind::LeCun:
      return "lecun";
    case InitKind::XavierSigmoid:
      return "xavier-sigmoid";
    case InitKind::XavierTanh:
      return "xavier-tanh";
    case InitKind::He:
      return "he";
    case InitKind::RpInit: {
      std::string out = "rp:" + std::string(rp::to_string(s.rp_scheme));
      if (s.rp_scheme == rp::Scheme::CountSketch) {
        char buf[32];
        auto r = std::to_chars(buf, buf + sizeof buf, s.cs_gamma);
        out += ":" + std::string(buf, r.ptr);
      }
      return out;
    }
  }
  return "?";
}

InitScheme parse_init(std::string_view s) {
  InitScheme out;
  if (s == "lecun") {
    out.kind = InitKind::LeCun;
  } else if (s == "xavier-sigmoid") {
    out.kind = InitKind::XavierSigmoid;
  } else if (s == "xavier-tanh") {
    out.kind = InitKind::XavierTanh;
  } else if (s == "he") {
    out.kind = InitKind::He;
  } else if (s.starts_with("rp:")) {
    out.kind = InitKind::RpInit;
    auto rest = s.substr(3);
    const auto colon = rest.find(':');
    out.rp_scheme = rp::parse_scheme(rest.substr(0, colon));
    if (colon != std::string_view::npos) {
      const auto g = rest.substr(colon + 1);
      auto r = std::from_chars(g.data(), g.data() + g.size(), out.cs_gamma);
      if (r.ec != std::errc() || r.ptr != g.data() + g.size()) {
        throw InvalidArgument("bad init scale in '" + std::string(s) + "'");
      }
    }
  } else {
    throw InvalidArgument("unknown init scheme '" + std::string(s) + "'");
  }
  out.validate();
  return out;
}

double sample_std(const CsrMatrix& w) {
  const double n = static_cast<double>(w.rows()) * static_cast<double>(w.cols());
  if (n == 0) return 0.0;
  double sum = 0.0, sq = 0.0;
  for (double v : w.values()) {
    sum += v;
    sq += v * v;
  }
  const double mean = sum / n;
  return std::sqrt(std::max(0.0, sq / n - mean * mean));
}

double sample_std(const DenseMatrix& w) {
  if (w.size() == 0) return 0.0;
  const double n = static_cast<double>(w.size());
  double mean = 0.0;
  for (double v : w.data()) mean += v;
  mean /= n;
  double sq = 0.0;
  for (double v : w.data()) sq += (v - mean) * (v - mean);
  return std::sqrt(sq / n);
}

CsrMatrix rp_init_pattern(std::size_t f_in, std::size_t f_out,
                          const InitScheme& scheme, std::uint64_t seed) {
  check_shape(f_in, f_out);
  if (scheme.kind != InitKind::RpInit) {
    throw InvalidArgument("rp_init_pattern needs an RP init scheme");
  }
  scheme.validate();
  rp::RpSchemeSpec spec;
  spec.kind = scheme.rp_scheme;
  spec.d = f_in;
  spec.k = f_out;
  spec.seed = seed;
  rp::RpMatrix p = rp::generate(spec);
  CsrMatrix m = p.is_sparse() ? p.sparse() : CsrMatrix::from_dense(p.dense());

  double factor = scheme.cs_gamma;
  if (scheme.rp_scheme != rp::Scheme::CountSketch) {
    const double s = sample_std(m);
    if (!(s > 0.0)) {
      throw NumericError("rp init: generated matrix has zero variance");
    }
    factor = std::sqrt(2.0 / static_cast<double>(f_in)) / s;
  }
  Buffer<double> vals(m.values().begin(), m.values().end());
  for (double& v : vals) v *= factor;
  return CsrMatrix(
      m.rows(), m.cols(),
      Buffer<std::size_t>(m.row_offsets().begin(), m.row_offsets().end()),
      Buffer<Index>(m.col_indices().begin(), m.col_indices().end()),
      std::move(vals));
}

DenseMatrix init_weights(std::size_t f_in, std::size_t f_out,
                         const InitScheme& scheme, std::uint64_t seed) {
  check_shape(f_in, f_out);
  const double fi = static_cast<double>(f_in);
  const double fo = static_cast<double>(f_out);
  switch (scheme.kind) {
    case InitKind::LeCun:
      return uniform(f_in, f_out, 1.0 / std::sqrt(fi), seed);
    case InitKind::XavierSigmoid:
      return uniform(f_in, f_out, std::sqrt(6.0 / (fi + fo)), seed);
    case InitKind::XavierTanh:
      return uniform(f_in, f_out, 4.0 * std::sqrt(6.0 / (fi + fo)), seed);
    case InitKind::He: {
      DenseMatrix w(f_in, f_out);
      rp::RngStream s(seed, 0);
      const double sd = std::sqrt(2.0 / fi);
      for (double& v : w.data()) v = sd * s.normal();
      return w;
    }
    case InitKind::RpInit:
      return rp_init_pattern(f_in, f_out, scheme, seed).to_dense();
  }
  return DenseMatrix(f_in, f_out);
}

}  // namespace rpnet::nn
