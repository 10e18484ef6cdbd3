#ifndef TCD_PARALLEL_HPP
#define TCD_PARALLEL_HPP

// Optional internal parallelism for independent restart/trial loops.
// Controlled by the TCD_THREADS environment variable: unset or "1" runs
// serial, "0" uses the hardware thread count, any other integer is taken
// literally. Work items are indexed and results are reduced sequentially,
// so the thread count never changes the output.

#include <algorithm>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace tcd {

inline int resolve_thread_count() {
  const char* env = std::getenv("TCD_THREADS");
  if (env == nullptr) return 1;
  int requested = 1;
  try {
    requested = std::stoi(env);
  } catch (...) {
    return 1;
  }
  if (requested < 0) return 1;
  if (requested == 0) {
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
  }
  return requested;
}

template <typename Fn>
void parallel_for(std::size_t count, Fn&& fn) {
  const int threads = resolve_thread_count();
  if (threads <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(threads), count);
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w]() {
      for (std::size_t i = w; i < count; i += workers) fn(i);
    });
  }
  for (std::thread& th : pool) th.join();
}

}  // namespace tcd

#endif  // TCD_PARALLEL_HPP
