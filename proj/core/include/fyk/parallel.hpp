#pragma once

#include <cstddef>
#include <functional>

namespace fyk {

// Worker count from FYK_THREADS (>= 1), else hardware concurrency.
unsigned worker_count();

// Runs body(i) for i in [0, count) on up to worker_count() threads. Each
// index is handled exactly once; the first exception is rethrown.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace fyk
