#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace hk {

inline std::size_t default_threads() { return std::max<std::size_t>(1, std::thread::hardware_concurrency()); }

/// Calls job(k) for k in [0, count) on up to `threads` workers. Jobs write to
/// their own slots, so results do not depend on scheduling. The first
/// exception thrown by a job is rethrown after all workers finish.
template <class Job>
void parallel_for(std::size_t count, std::size_t threads, Job&& job) {
  threads = std::clamp<std::size_t>(threads == 0 ? default_threads() : threads, 1, std::max<std::size_t>(count, 1));
  if (threads == 1) {
    for (std::size_t k = 0; k < count; ++k) job(k);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (std::size_t k; (k = next.fetch_add(1)) < count;) {
      try {
        job(k);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        next = count;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (std::size_t w = 0; w < threads; ++w) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace hk
