#pragma once

#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <utility>
#include <vector>

namespace qaoap {

inline int default_thread_count() {
  const unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : static_cast<int>(hc);
}

/// Runs fn(i) for i in [0, count). Static block partition: worker t owns a
/// contiguous range, so per-slot writes need no synchronization and results
/// are deterministic for a fixed thread count. First exception is rethrown.
template <typename Fn>
void parallel_for(std::size_t count, int threads, Fn&& fn) {
  if (count == 0) return;
  if (threads > static_cast<int>(count)) threads = static_cast<int>(count);
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  std::exception_ptr error;
  std::mutex error_mutex;
  const std::size_t t = static_cast<std::size_t>(threads);
  for (std::size_t w = 0; w < t; ++w) {
    pool.emplace_back([&, w] {
      const std::size_t lo = count * w / t;
      const std::size_t hi = count * (w + 1) / t;
      try {
        for (std::size_t i = lo; i < hi; ++i) fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace qaoap
