#pragma once

#include <cstddef>
#include <functional>

namespace amoebakit {

/// Number of worker threads used by `parallel_for`. Defaults to 1.
void set_thread_count(int threads);
int thread_count();

/// Runs `body(i)` for every i in [0, count). Indices are split into
/// contiguous blocks, one per worker. The body must only write to storage
/// owned by index i; reductions are done by the caller in index order, so
/// results do not depend on the thread count.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace amoebakit
