#pragma once

#include <cstdint>
#include <functional>

namespace menuconnect {

// Worker count: hardware concurrency, capped by the MENUCONNECT_THREADS
// environment variable when set.
int worker_count();

// Runs fn(begin, end) over disjoint index chunks, possibly on several
// threads. Callers write into preallocated per-index slots and reduce
// sequentially afterwards, so results do not depend on the thread count.
void parallel_chunks(std::int64_t count, const std::function<void(std::int64_t, std::int64_t)>& fn);

}  // namespace menuconnect
