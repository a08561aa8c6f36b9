#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace hypercover {

/// How many worker threads an operation may use. Results never depend on it.
struct Execution {
  std::size_t threads = 1;
};

/// Run body(i) for i in [0, count) on up to `threads` workers.
///
/// Work items are claimed dynamically, so callers must make each item write
/// only to its own output slot; any order-dependent reduction happens after.
template <class Body>
void parallel_for(std::size_t count, Execution exec, Body&& body) {
  const std::size_t workers = std::min(std::max<std::size_t>(exec.threads, 1), count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < count; i = next++) {
          try {
            body(i);
          } catch (...) {
            std::lock_guard lock(error_mutex);
            if (!error) error = std::current_exception();
            next = count;
          }
        }
      });
    }
  }
  if (error) std::rethrow_exception(error);
}

}  // namespace hypercover
