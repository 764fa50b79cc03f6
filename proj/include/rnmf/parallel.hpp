#pragma once

#include <cstddef>
#include <functional>

namespace rnmf {

/// Worker count from the RNMF_THREADS environment variable; 0 or unset
/// selects the hardware concurrency. Always at least 1.
std::size_t thread_count_from_env();

/// Runs body(i) for i in [0, n) across `threads` workers with a static
/// contiguous partition. Iterations must be independent; results are then
/// identical for every thread count. The first exception (lowest worker
/// index) is rethrown after all workers join.
void parallel_for(std::size_t n, std::size_t threads, const std::function<void(std::size_t)>& body);

}  // namespace rnmf
