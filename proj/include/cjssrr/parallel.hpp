#pragma once

#include <cstddef>
#include <functional>

namespace cjssrr {

/// Worker count for column-parallel loops. Defaults to $CJSSRR_THREADS or 1.
int thread_count();
void set_thread_count(int threads);

/// Runs fn(i) for i in [0, count). Iterations are split into contiguous
/// chunks; each index is touched by exactly one worker, so results do not
/// depend on the worker count.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn);

}  // namespace cjssrr
