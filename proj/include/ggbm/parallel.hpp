#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>

namespace ggbm {

// Worker-thread count: explicit request clamped to [1, 256]; requested <= 0
// falls back to the GGBM_THREADS environment variable, then to 1.
int resolve_threads(int requested);

// Runs block_fn(begin, end) over a static contiguous partition of [0, n)
// across `threads` workers (inline when threads <= 1 or n is small). The
// partition depends only on (n, threads); work items must be independent.
// The first exception thrown by any worker is rethrown after joining.
void parallel_for(std::int64_t n, int threads,
                  const std::function<void(std::int64_t, std::int64_t)>& block_fn);

// Order-insensitive pairwise summation (used for ensemble reductions so
// results do not depend on the degree of parallelism feeding the buffer).
double pairwise_sum(const double* data, std::size_t n);

} // namespace ggbm
