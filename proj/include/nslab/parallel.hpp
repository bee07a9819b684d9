#pragma once

#include <cstddef>
#include <functional>

namespace nslab {

/// Worker count: NSLAB_THREADS if set (>= 1), else hardware concurrency.
unsigned worker_count();

/// Runs body(i) for i in [0, count) on up to worker_count() threads.
/// Iterations must be independent; results are written by index, so the
/// outcome does not depend on scheduling. The first exception thrown by
/// any iteration is rethrown after all workers join.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace nslab
