#pragma once

#include <cstddef>
#include <functional>

namespace mrc {

// Upper bound on worker threads used by parallel_for. Initialized from the
// MRC_THREADS environment variable (default: hardware concurrency).
std::size_t thread_count();
void set_thread_count(std::size_t n);

// Runs body(i) for i in [0, n). Iterations are split into contiguous chunks;
// callers must only write to per-index state so results do not depend on the
// number of threads.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

// Sum with a fixed pairwise reduction tree; identical result for any thread count.
double pairwise_sum(const double* data, std::size_t n);

}  // namespace mrc
