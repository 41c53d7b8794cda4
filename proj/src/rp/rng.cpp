// SPDX-License-Identifier: MIT

#include "rpnet/rp/rng.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace rpnet::rp {

RngStream::RngStream(std::uint64_t root_seed, std::uint64_t stream_id) noexcept
    : key_(mix64(root_seed ^ mix64(stream_id ^ 0xd1b54a32d192ed03ULL))) {}

double RngStream::normal() noexcept {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double u1 = uniform_pos();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(theta);
  has_spare_ = true;
  return r * std::cos(theta);
}

std::uint64_t RngStream::geometric_gap(double p) noexcept {
  if (p >= 1.0) return 0;
  if (p <= 0.0) return std::numeric_limits<std::uint64_t>::max();
  const double g = std::floor(std::log(uniform_pos()) / std::log1p(-p));
  if (!(g < 1.8e19)) return std::numeric_limits<std::uint64_t>::max();
  return static_cast<std::uint64_t>(g);
}

}  // namespace rpnet::rp
