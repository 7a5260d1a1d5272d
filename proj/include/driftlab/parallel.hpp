#pragma once

#include <cstddef>
#include <thread>
#include <vector>

namespace driftlab {

inline unsigned effective_threads(int requested) {
  if (requested > 0) return static_cast<unsigned>(requested);
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

/// Runs fn(i) for i in [0, n). Work is chunked by index so results written
/// into pre-sized buffers are identical for any thread count.
template <typename Fn>
void parallel_for_index(std::size_t n, int threads, Fn&& fn) {
  const unsigned t = effective_threads(threads);
  if (t <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(t);
  for (unsigned w = 0; w < t; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < n; i += t) fn(i);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace driftlab
