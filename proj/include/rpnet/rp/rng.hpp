// SPDX-License-Identifier: MIT

#pragma once

#include <cstdint>

namespace rpnet::rp {

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Counter-based random stream. The n-th draw is a pure function of
/// (root_seed, stream_id, n), so independent streams (one per projection
/// column, dataset row, epoch, ...) need no shared state and reproduce
/// across platforms and slicings.
class RngStream {
 public:
  RngStream(std::uint64_t root_seed, std::uint64_t stream_id) noexcept;

  /// Draw at an explicit counter position; does not advance the stream.
  std::uint64_t at(std::uint64_t counter) const noexcept {
    return mix64(key_ + (counter + 1) * 0x9e3779b97f4a7c15ULL);
  }

  std::uint64_t next_u64() noexcept { return at(counter_++); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() noexcept {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Uniform on (0, 1].
  double uniform_pos() noexcept {
    return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
  }

  /// Standard normal via Box-Muller; the second variate of each pair is
  /// cached.
  double normal() noexcept;

  bool bernoulli(double p) noexcept { return uniform() < p; }

  /// Uniform integer in [0, n) by 128-bit multiply-high (bias <= n / 2^64).
  std::uint64_t below(std::uint64_t n) noexcept {
    return scale_below(next_u64(), n);
  }

  /// Number of failures before the next success of a Bernoulli(p) process.
  std::uint64_t geometric_gap(double p) noexcept;

  std::uint64_t counter() const noexcept { return counter_; }

  static std::uint64_t scale_below(std::uint64_t x, std::uint64_t n) noexcept {
    __extension__ using u128 = unsigned __int128;
    return static_cast<std::uint64_t>((static_cast<u128>(x) * n) >> 64);
  }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// Reserved stream ids; column and row streams use small ids from 0 upward.
namespace streams {
inline constexpr std::uint64_t kSigns = 0xffffffffffff0001ULL;
inline constexpr std::uint64_t kCountSketch = 0xffffffffffff0002ULL;
inline constexpr std::uint64_t kSplit = 0xffffffffffff0003ULL;
inline constexpr std::uint64_t kSignificant = 0xffffffffffff0004ULL;
inline constexpr std::uint64_t kShuffle = 0xffffffffffff0005ULL;
inline constexpr std::uint64_t kGate = 0xffffffffffff0006ULL;
inline constexpr std::uint64_t kPairs = 0xffffffffffff0007ULL;
inline constexpr std::uint64_t kTrials = 0xffffffffffff0008ULL;
}  // namespace streams

/// Derives an independent seed for a sub-component (e.g. one layer).
constexpr std::uint64_t derive_seed(std::uint64_t seed,
                                    std::uint64_t salt) noexcept {
  return mix64(seed ^ mix64(salt + 0x632be59bd9b4e019ULL));
}

}  // namespace rpnet::rp
