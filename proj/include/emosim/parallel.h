#pragma once

#include <cstddef>
#include <functional>

namespace emosim {

// Worker count: EMOSIM_THREADS when set to a positive integer, otherwise
// the hardware concurrency (at least 1).
std::size_t WorkerCount();

// Runs fn(i) for every i in [0, n), split into contiguous blocks across
// WorkerCount() threads. fn must only write state owned by index i.
// The first exception thrown by any worker is rethrown on the caller.
void ParallelFor(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace emosim
