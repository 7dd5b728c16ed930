#include "menuconnect/parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <thread>
#include <vector>

namespace menuconnect {

int worker_count() {
  int workers = static_cast<int>(std::thread::hardware_concurrency());
  if (workers <= 0) workers = 1;
  if (const char* cap = std::getenv("MENUCONNECT_THREADS")) {
    const int requested = std::atoi(cap);
    if (requested >= 1) workers = std::min(workers, requested);
  }
  return workers;
}

void parallel_chunks(std::int64_t count,
                     const std::function<void(std::int64_t, std::int64_t)>& fn) {
  if (count <= 0) return;
  const int workers = std::min<std::int64_t>(worker_count(), count);
  if (workers <= 1 || count < 4096) {
    fn(0, count);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  const std::int64_t chunk = (count + workers - 1) / workers;
  for (int w = 0; w < workers; ++w) {
    const std::int64_t begin = w * chunk;
    const std::int64_t end = std::min(count, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back(fn, begin, end);
  }
  for (std::thread& t : pool) t.join();
}

}  // namespace menuconnect
