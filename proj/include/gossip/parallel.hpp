#pragma once

#include <algorithm>
#include <cstdint>
#include <exception>
#include <thread>
#include <vector>

namespace gossip {

/// Runs fn(begin, end) over a partition of [0, count). Results must be
/// written to disjoint slots so the outcome does not depend on scheduling.
/// threads <= 0 picks the hardware concurrency. The first exception (by
/// chunk order) is rethrown.
template <class Fn>
void parallel_for(std::int64_t count, Fn&& fn, int threads = 0) {
  if (count <= 0) return;
  if (threads <= 0) threads = static_cast<int>(std::thread::hardware_concurrency());
  threads = static_cast<int>(std::max<std::int64_t>(1, std::min<std::int64_t>(threads, count)));

  if (threads == 1) {
    fn(std::int64_t{0}, count);
    return;
  }

  const std::int64_t chunk = (count + threads - 1) / threads;
  std::vector<std::exception_ptr> errors(threads);
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (int t = 0; t < threads; ++t) {
    const std::int64_t begin = t * chunk;
    const std::int64_t end = std::min(count, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back([&, t, begin, end] {
      try {
        fn(begin, end);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& err : errors)
    if (err) std::rethrow_exception(err);
}

}  // namespace gossip
