#pragma once

#include <cstddef>
#include <functional>

namespace mfspec {

/// Worker count from MFSPEC_THREADS, else hardware concurrency (min 1).
std::size_t default_thread_count();

/// Runs body(i) for i in [0, n) on up to `threads` workers. Each index is
/// visited exactly once; callers write into per-index slots so results do
/// not depend on scheduling. The first exception thrown is rethrown.
void parallel_for(std::size_t n, std::size_t threads, const std::function<void(std::size_t)>& body);

}  // namespace mfspec
