#pragma once

#include <functional>

namespace a4 {

/// Number of workers used by stencil loops. 0 selects the hardware concurrency.
/// Results never depend on this value: every parallel loop writes disjoint
/// outputs and performs no cross-worker reduction.
void set_thread_count(unsigned n);
unsigned thread_count();

/// Calls body(begin, end) on contiguous chunks covering [0, n).
void parallel_for(long n, const std::function<void(long, long)>& body);

}  // namespace a4
