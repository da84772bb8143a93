#pragma once

#include <cstddef>
#include <functional>

namespace mdcs {

/// Thread cap from the MDCS_THREADS environment variable; defaults to the
/// hardware concurrency. Always at least 1.
unsigned max_threads();

/// Runs fn(i) for i in [0, n). Jobs must be independent and deterministic
/// given their index; results are therefore invariant to scheduling. The
/// first exception thrown by a job is rethrown after all threads join.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace mdcs
