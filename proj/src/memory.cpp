// SPDX-License-Identifier: MIT

#include "rpnet/memory.hpp"

#include <atomic>

namespace rpnet::memory {
namespace {

std::atomic<std::size_t> g_current{0};
std::atomic<std::size_t> g_peak{0};

}  // namespace

std::size_t current_bytes() noexcept { return g_current.load(); }

std::size_t peak_bytes() noexcept { return g_peak.load(); }

std::size_t reset_peak() noexcept {
  const std::size_t now = g_current.load();
  g_peak.store(now);
  return now;
}

void on_allocate(std::size_t bytes) noexcept {
  const std::size_t now = g_current.fetch_add(bytes) + bytes;
  std::size_t peak = g_peak.load();
  while (now > peak && !g_peak.compare_exchange_weak(peak, now)) {
  }
}

void on_deallocate(std::size_t bytes) noexcept { g_current.fetch_sub(bytes); }

}  // namespace rpnet::memory
