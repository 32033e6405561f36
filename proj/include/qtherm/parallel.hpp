// Deterministic parallel loop. The index space is split into contiguous
// static chunks, each index writes only its own slot, and reductions are
// done sequentially by the caller afterwards, so results never depend on
// the worker count.
#pragma once

#include <algorithm>
#include <cstdint>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace qtherm {

inline void parallel_for(std::int64_t n, int workers,
                         const std::function<void(std::int64_t)>& body) {
  if (n <= 0) return;
  const std::int64_t t = std::clamp<std::int64_t>(workers, 1, n);
  if (t == 1) {
    for (std::int64_t i = 0; i < n; ++i) body(i);
    return;
  }

  std::mutex error_mutex;
  std::exception_ptr first_error;
  std::vector<std::thread> threads;
  threads.reserve(static_cast<std::size_t>(t));
  for (std::int64_t k = 0; k < t; ++k) {
    const std::int64_t begin = k * n / t;
    const std::int64_t end = (k + 1) * n / t;
    threads.emplace_back([&, begin, end] {
      try {
        for (std::int64_t i = begin; i < end; ++i) body(i);
      } catch (...) {
        const std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    });
  }
  for (auto& th : threads) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace qtherm
