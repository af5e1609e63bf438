#pragma once

#include <cstddef>
#include <functional>

namespace memdomain {

/// Worker count from MEMDOMAIN_THREADS (0 or unset = hardware concurrency).
unsigned worker_count();

/// Runs body(i) for i in [0, count). Each index is visited exactly once;
/// callers write results into pre-sized slots so output order never depends
/// on scheduling. The first exception thrown by a body is rethrown.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace memdomain
