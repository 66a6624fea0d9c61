#pragma once

#include <atomic>
#include <cstdlib>
#include <exception>
#include <thread>
#include <vector>

namespace spacobi {

// Worker cap for embarrassingly parallel stages. SPACOBI_THREADS
// overrides hardware concurrency; values < 1 fall back to 1.
inline std::size_t max_threads() {
  if (const char* env = std::getenv("SPACOBI_THREADS")) {
    const long v = std::atol(env);
    if (v >= 1) return std::size_t(v);
    return 1;
  }
  const unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : hc;
}

// Runs fn(i) for i in [0, count) across up to max_threads() workers.
// Work items must be independent; results should be written to
// index-addressed slots so aggregation order never matters. The first
// exception thrown by any item is rethrown after all workers join.
template <class Fn>
void parallel_for_index(std::size_t count, Fn&& fn) {
  if (count == 0) return;
  const std::size_t workers = std::min(max_threads(), count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }

  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::atomic<bool> failed{false};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      while (true) {
        const std::size_t i = next.fetch_add(1);
        if (i >= count || failed.load()) return;
        try {
          fn(i);
        } catch (...) {
          if (!failed.exchange(true)) error = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace spacobi
