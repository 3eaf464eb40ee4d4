#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace qtr {

/// Runs body(i) for i in [0, n) on up to `parallelism` threads. Threads pull
/// indices from a shared counter; callers write results into slot i and
/// reduce in index order afterwards, so the outcome never depends on
/// scheduling. The first exception thrown by any body is rethrown here.
template <typename Body>
void parallel_for_index(std::int64_t n, int parallelism, Body&& body) {
  const int workers = static_cast<int>(
      std::clamp<std::int64_t>(parallelism, 1, std::max<std::int64_t>(n, 1)));
  if (workers == 1) {
    for (std::int64_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::int64_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (;;) {
      const std::int64_t i = next.fetch_add(1, std::memory_order_relaxed);
      if (i >= n) return;
      try {
        body(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(n, std::memory_order_relaxed);
        return;
      }
    }
  };
  {
    std::vector<std::jthread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);
}

}  // namespace qtr
