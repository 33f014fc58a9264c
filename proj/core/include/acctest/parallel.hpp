#pragma once

#include <cstddef>
#include <functional>

namespace acctest {

/// Worker count from ACCTEST_THREADS if set and positive, else the hardware
/// concurrency (at least 1).
unsigned default_thread_count();

/// Calls fn(i) for every i in [0, count) on up to `threads` workers.
/// Callers write results into slot i, so output never depends on scheduling.
/// The first exception thrown by fn is rethrown after all workers stop.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& fn);

}  // namespace acctest
