#pragma once

#include <cstddef>
#include <functional>

namespace cgsc {

/// Upper bound on worker threads used by numeric kernels. Initialized from
/// CGSC_THREADS on first use (0 or unset means hardware concurrency).
std::size_t thread_cap();
void set_thread_cap(std::size_t cap);

/// Runs body(i) for i in [0, count). Work is split across up to
/// thread_cap() threads only when `work` (a rough flop count) is large
/// enough to amortize thread start-up. Each index must write disjoint state.
void parallel_for(std::size_t count, std::size_t work, const std::function<void(std::size_t)>& body);

}  // namespace cgsc
