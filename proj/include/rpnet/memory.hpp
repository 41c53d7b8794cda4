// SPDX-License-Identifier: MIT

#pragma once

#include <cstddef>
#include <cstdint>
#include <new>
#include <vector>

namespace rpnet {

// Process-wide accounting of bytes held by matrix storage. Every Buffer<T>
// allocation goes through TrackingAllocator, which lets tests bound the peak
// working set of the out-of-core projection.
namespace memory {

std::size_t current_bytes() noexcept;
std::size_t peak_bytes() noexcept;

// Resets the peak to the current live size; returns the new peak.
std::size_t reset_peak() noexcept;

void on_allocate(std::size_t bytes) noexcept;
void on_deallocate(std::size_t bytes) noexcept;

}  // namespace memory

template <class T>
struct TrackingAllocator {
  using value_type = T;

  TrackingAllocator() noexcept = default;
  template <class U>
  TrackingAllocator(const TrackingAllocator<U>&) noexcept {}

  T* allocate(std::size_t n) {
    T* p = std::allocator<T>{}.allocate(n);
    memory::on_allocate(n * sizeof(T));
    return p;
  }

  void deallocate(T* p, std::size_t n) noexcept {
    memory::on_deallocate(n * sizeof(T));
    std::allocator<T>{}.deallocate(p, n);
  }

  template <class U>
  bool operator==(const TrackingAllocator<U>&) const noexcept {
    return true;
  }
};

template <class T>
using Buffer = std::vector<T, TrackingAllocator<T>>;

// Column index type used by CSR storage.
using Index = std::uint32_t;

}  // namespace rpnet
