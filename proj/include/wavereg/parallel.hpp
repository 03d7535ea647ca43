#pragma once

#include <cstddef>
#include <functional>

namespace wavereg::parallel {

/// Number of worker threads used by library-internal loops. Defaults to the
/// hardware concurrency. Results never depend on this setting: every parallel
/// loop writes disjoint slots and reductions happen afterwards in index order.
void set_thread_count(int n);
int thread_count();

/// Calls body(i) for i in [0, n), split into contiguous chunks across threads.
void for_each_index(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace wavereg::parallel
