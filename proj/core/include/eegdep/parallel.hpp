#pragma once

#include <atomic>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace eegdep {

// Runs f(0), ..., f(n-1) on up to `workers` threads, each index claimed once
// through a shared counter. Output stays byte-identical to the serial run as
// long as each f(i) writes only to its own preallocated slot; any reduction
// over slots afterwards happens in index order on the caller's thread.
inline void parallel_for(std::size_t n, int workers,
                         const std::function<void(std::size_t)>& f) {
  if (workers <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) f(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  const std::size_t thread_count = std::min(static_cast<std::size_t>(workers), n);
  std::vector<std::thread> threads;
  threads.reserve(thread_count);
  for (std::size_t t = 0; t < thread_count; ++t) {
    threads.emplace_back([&] {
      while (true) {
        const std::size_t i = next.fetch_add(1);
        if (i >= n) break;
        try {
          f(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!first_error) first_error = std::current_exception();
        }
      }
    });
  }
  for (auto& th : threads) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace eegdep
