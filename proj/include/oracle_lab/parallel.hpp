#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <functional>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace oracle_lab {

// Worker count: ORACLE_LAB_THREADS when set to a positive integer, else the
// hardware concurrency (at least 1).
inline std::size_t default_thread_count() {
  if (const char* env = std::getenv("ORACLE_LAB_THREADS")) {
    try {
      const long v = std::stol(env);
      if (v > 0) return static_cast<std::size_t>(v);
    } catch (const std::exception&) {
    }
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

// Runs body(k) for k in [0, count) on up to `threads` workers with a static
// interleaved schedule. The first exception thrown by any task is rethrown.
// Callers that need determinism write into slot k and reduce afterwards.
inline void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body,
                         std::size_t threads = default_thread_count()) {
  if (threads <= 1 || count <= 1) {
    for (std::size_t k = 0; k < count; ++k) body(k);
    return;
  }
  threads = std::min(threads, count);
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> workers;
  workers.reserve(threads);
  for (std::size_t t = 0; t < threads; ++t) {
    workers.emplace_back([&, t] {
      try {
        for (std::size_t k = t; k < count; k += threads) body(k);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    });
  }
  for (auto& w : workers) w.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace oracle_lab
