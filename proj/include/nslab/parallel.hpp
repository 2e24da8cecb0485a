#pragma once

#include <cstddef>
#include <functional>

namespace nslab {

// Worker count: hardware concurrency, capped by NS_LAB_THREADS when set.
unsigned worker_count();

// Runs body(i) for i in [0, count) on up to worker_count() threads. Indices are
// handed out in order; each index runs exactly once. Exceptions escaping body
// are the caller's responsibility (wrap per index).
void parallel_for(size_t count, const std::function<void(size_t)>& body);

} // namespace nslab
