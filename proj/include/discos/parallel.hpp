#pragma once

#include <cstddef>
#include <exception>
#include <functional>

namespace discos {

/// Worker count: hardware concurrency, capped by DISCOS_THREADS when set.
unsigned worker_count();

/// Calls body(i) for i in [0, n) across worker_count() threads using static
/// contiguous chunks. Each index must write only to its own output slot, so
/// results do not depend on the thread count. The first exception thrown by
/// any worker is rethrown on the calling thread.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace discos
