#include "a4/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <thread>
#include <vector>

namespace a4 {

namespace {
std::atomic<unsigned> g_threads{1};
}

void set_thread_count(unsigned n) {
  if (n == 0) n = std::max(1u, std::thread::hardware_concurrency());
  g_threads.store(n);
}

unsigned thread_count() { return g_threads.load(); }

void parallel_for(long n, const std::function<void(long, long)>& body) {
  if (n <= 0) return;
  const long workers = std::min<long>(thread_count(), n);
  if (workers <= 1) {
    body(0, n);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers - 1));
  const long chunk = (n + workers - 1) / workers;
  for (long w = 1; w < workers; ++w) {
    const long b = w * chunk;
    const long e = std::min(n, b + chunk);
    if (b < e) pool.emplace_back(body, b, e);
  }
  body(0, std::min(n, chunk));
  for (auto& t : pool) t.join();
}

}  // namespace a4
