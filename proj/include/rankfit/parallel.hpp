#pragma once

#include <cstddef>
#include <functional>

namespace rankfit {

// Thread count to use for internal parallel loops: the value of
// RANKFIT_THREADS when set to a positive integer, otherwise the hardware
// concurrency (at least 1).
unsigned default_thread_count();

// Calls body(i) for every i in [0, n), split into contiguous blocks over at
// most `threads` workers. Iterations must be independent; results should be
// written to per-index slots so the reduction stays deterministic.
void parallel_for(std::size_t n, unsigned threads,
                  const std::function<void(std::size_t)>& body);

}  // namespace rankfit
