#pragma once

#include <cstddef>
#include <functional>

namespace zlab {

// Worker count for `jobs` independent tasks: hardware concurrency, capped by
// the ZLAB_THREADS environment variable when set.
std::size_t worker_count(std::size_t jobs);

// Runs body(0..count-1) on worker threads. Results must be written by index;
// completion order is unspecified but dispatch is by atomic counter, so
// callers indexing into preallocated output stay deterministic. If a body
// throws, the lowest-index exception is rethrown after all workers join.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

} // namespace zlab
