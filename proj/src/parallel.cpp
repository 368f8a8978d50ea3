#include "airway/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <thread>
#include <vector>

namespace airway {

namespace {
std::atomic<int> g_threads{0};

int resolve_threads() {
  int n = g_threads.load(std::memory_order_relaxed);
  if (n <= 0) n = static_cast<int>(std::thread::hardware_concurrency());
  return std::max(1, n);
}
}  // namespace

void set_thread_count(int n) { g_threads.store(n, std::memory_order_relaxed); }

int thread_count() { return resolve_threads(); }

void parallel_for(std::size_t begin, std::size_t end,
                  const std::function<void(std::size_t, std::size_t)>& fn) {
  if (begin >= end) return;
  const std::size_t n = end - begin;
  const int workers = static_cast<int>(
      std::min<std::size_t>(n, static_cast<std::size_t>(resolve_threads())));
  if (workers <= 1 || n < 2) {
    fn(begin, end);
    return;
  }
  const std::size_t chunk = (n + workers - 1) / workers;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    const std::size_t lo = begin + chunk * w;
    if (lo >= end) break;
    const std::size_t hi = std::min(end, lo + chunk);
    pool.emplace_back([lo, hi, &fn] { fn(lo, hi); });
  }
  for (auto& t : pool) t.join();
}

}  // namespace airway
