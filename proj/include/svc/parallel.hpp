#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <type_traits>
#include <vector>

namespace svc {

/// Evaluates fn(i) for i in [0, count) on a few threads. Results are stored
/// by index, so the output never depends on scheduling. The first exception
/// thrown by any worker is rethrown on the calling thread.
template <typename Fn>
auto parallel_map(std::size_t count, Fn&& fn) {
  using Result = std::decay_t<decltype(fn(std::size_t{}))>;
  std::vector<Result> results(count);
  if (count == 0) return results;

  const std::size_t hw = std::max(1u, std::thread::hardware_concurrency());
  const std::size_t workers = std::min<std::size_t>(hw, (count + 63) / 64);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) results[i] = fn(i);
    return results;
  }

  std::exception_ptr failure;
  std::mutex failure_mutex;
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (std::size_t i = w; i < count; i += workers) results[i] = fn(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      });
    }
  }
  if (failure) std::rethrow_exception(failure);
  return results;
}

}  // namespace svc
