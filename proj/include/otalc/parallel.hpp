#pragma once

#include <cstdint>
#include <functional>

namespace otalc {

// Worker count for parallel sections: OTALC_THREADS caps it, 0 or unset
// means one per hardware thread.
int thread_budget();

// Runs fn(0..n-1) across the thread budget. Any exception from a worker is
// rethrown on the calling thread after all workers join.
void parallel_for(std::int64_t n, const std::function<void(std::int64_t)>& fn);

} // namespace otalc
