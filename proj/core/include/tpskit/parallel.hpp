#pragma once

#include <cstddef>
#include <functional>

namespace tpskit {

// Worker count: TPSKIT_THREADS if set to a positive integer, otherwise the
// hardware concurrency (at least 1).
std::size_t worker_count();

// Runs body(i) for i in [0, n) on up to worker_count() threads. Each index
// runs exactly once; callers write results into slot i so the outcome does
// not depend on scheduling. The exception from the lowest failing index is
// rethrown after all workers finish.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace tpskit
