#pragma once

#include <cstddef>
#include <functional>

namespace mie {

// Worker count: hardware concurrency, capped by MI_ELLIPSE_THREADS when set.
unsigned worker_count();

// Calls body(i) for i in [0, n) across worker_count() threads. Work is
// statically interleaved, so results written per index are deterministic.
// The first exception thrown by any call is rethrown after all workers join.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace mie
