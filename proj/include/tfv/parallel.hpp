#pragma once

#include <functional>

namespace tfv {

/// Worker count: min(hardware_concurrency, TFV_THREADS if set), at least 1.
int thread_count();

/// Run body(i) for i in [0, n). Work is split across thread_count() workers;
/// exceptions are captured and the one with the lowest index is rethrown, so
/// failure behavior is deterministic. Callers keep determinism by writing
/// into preallocated per-index slots and reducing order-independently.
void parallel_for(int n, const std::function<void(int)>& body);

}  // namespace tfv
