#pragma once

#include <cstddef>
#include <functional>

namespace dirac {

/// Global worker count; initialised from DIRAC_THRESHOLD_THREADS, else 1.
int thread_count();
void set_thread_count(int n);

/// Runs fn(i) for i in [0, count). Work is split into contiguous index
/// blocks; each index is handled exactly once, so results written by index
/// are independent of the thread count. Calls made from inside a worker run
/// serially.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn);

}  // namespace dirac
