#ifndef MELKIT_PARALLEL_HPP
#define MELKIT_PARALLEL_HPP

#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace melkit {

/** Worker cap: MELKIT_THREADS when set (>= 1), else the hardware count. */
inline unsigned thread_cap() {
  if (const char* env = std::getenv("MELKIT_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v >= 1) return static_cast<unsigned>(v);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw ? hw : 1;
}

/** Runs fn(0..count-1) across threads. Each index owns its output slot,
 *  so results are deterministic regardless of the schedule. */
inline void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn) {
  const unsigned workers = std::min<std::size_t>(thread_cap(), count ? count : 1);
  if (workers <= 1) {
    for (std::size_t k = 0; k < count; ++k) fn(k);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w)
    pool.emplace_back([&, w] {
      for (std::size_t k = w; k < count; k += workers) fn(k);
    });
  for (auto& t : pool) t.join();
}

}  // namespace melkit

#endif
