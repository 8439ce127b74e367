#pragma once
#include <cstdint>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace freqdet {

/// Runs fn(i) for i in [0, n) across `threads` workers (0 = hardware
/// concurrency, 1 = inline).  Static index striding; the caller must make
/// fn(i) write only to slot i so the result is schedule-independent.
inline void parallel_for(std::int64_t n, int threads, const std::function<void(std::int64_t)>& fn) {
  if (n <= 0) return;
  unsigned want = threads > 0 ? static_cast<unsigned>(threads) : std::thread::hardware_concurrency();
  if (want == 0) want = 1;
  if (want > static_cast<unsigned>(n)) want = static_cast<unsigned>(n);
  if (want == 1) {
    for (std::int64_t i = 0; i < n; ++i) fn(i);
    return;
  }

  std::vector<std::thread> pool;
  pool.reserve(want);
  std::exception_ptr first_error;
  std::mutex err_mutex;
  for (unsigned w = 0; w < want; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::int64_t i = w; i < n; i += want) fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(err_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace freqdet
