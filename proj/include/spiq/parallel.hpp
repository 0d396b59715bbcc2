#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <thread>
#include <vector>

namespace spiq {

namespace detail {
inline std::atomic<unsigned>& max_threads_slot() {
  static std::atomic<unsigned> slot{0};  // 0 = hardware_concurrency
  return slot;
}
}  // namespace detail

inline void set_max_threads(unsigned n) { detail::max_threads_slot().store(n); }

inline unsigned max_threads() {
  unsigned n = detail::max_threads_slot().load();
  if (n == 0) n = std::max(1u, std::thread::hardware_concurrency());
  return n;
}

// Static block partition over [begin, end). Workers write results into
// index-addressed slots only; callers reduce sequentially afterwards, so
// outcomes are identical for any thread count.
template <typename Fn>
void parallel_for(std::size_t begin, std::size_t end, Fn&& fn) {
  const std::size_t count = end - begin;
  const unsigned workers =
      static_cast<unsigned>(std::min<std::size_t>(max_threads(), count));
  if (workers <= 1) {
    for (std::size_t i = begin; i < end; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  const std::size_t chunk = (count + workers - 1) / workers;
  for (unsigned w = 0; w < workers; ++w) {
    const std::size_t lo = begin + static_cast<std::size_t>(w) * chunk;
    const std::size_t hi = std::min(end, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([lo, hi, &fn] {
      for (std::size_t i = lo; i < hi; ++i) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace spiq
