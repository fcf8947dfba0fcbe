#pragma once

#include <cstddef>
#include <functional>

namespace robin_plap {

/// Worker count: hardware concurrency, capped by the ROBIN_PLAP_THREADS
/// environment variable when it holds a positive integer, and by `tasks`.
std::size_t worker_count(std::size_t tasks);

/// Runs fn(k) for k in [0, n). Callers write results by index so output
/// order never depends on scheduling. The exception of the lowest failing
/// index is rethrown after all workers finish.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace robin_plap
