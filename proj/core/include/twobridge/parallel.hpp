#pragma once

#include <cstddef>
#include <functional>

namespace twobridge {

// Runs fn(i) for every i in [0, n), distributing iterations over up to
// `jobs` worker threads (jobs <= 1 runs inline).  Iterations are handed out
// through a shared atomic counter, so callers must not rely on any
// particular execution order.  The first exception thrown by any iteration
// is rethrown on the calling thread after all workers have stopped.
void parallel_for(std::size_t n, unsigned jobs,
                  const std::function<void(std::size_t)>& fn);

} // namespace twobridge
