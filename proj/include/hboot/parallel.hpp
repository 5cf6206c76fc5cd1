#pragma once

#include <cstddef>
#include <thread>
#include <vector>

namespace hboot {

[[nodiscard]] inline std::size_t resolve_thread_count(std::size_t requested) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? hw : 1;
}

// Runs body(index) for index in [0, count) across `threads` workers in
// contiguous chunks. The body must only write to per-index slots or
// thread-local accumulators; chunking never changes which index does what,
// so results are independent of the thread count.
template <typename Body>
inline void parallel_for(std::size_t count, std::size_t threads, const Body& body) {
  threads = resolve_thread_count(threads);
  if (threads <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  if (threads > count) threads = count;
  std::vector<std::thread> workers;
  workers.reserve(threads);
  const std::size_t chunk = (count + threads - 1) / threads;
  for (std::size_t t = 0; t < threads; ++t) {
    const std::size_t begin = t * chunk;
    const std::size_t end = std::min(count, begin + chunk);
    if (begin >= end) break;
    workers.emplace_back([&body, begin, end] {
      for (std::size_t i = begin; i < end; ++i) body(i);
    });
  }
  for (auto& w : workers) w.join();
}

}  // namespace hboot
