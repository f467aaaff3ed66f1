#pragma once

#include <functional>

namespace oedflow {

/// Worker count: OEDFLOW_THREADS if set and positive, else the hardware
/// concurrency (at least 1).
int worker_count();

/// Runs body(i) for i in [0, n) across worker threads. Each index is
/// visited exactly once; callers must not depend on visiting order.
void parallel_for(int n, const std::function<void(int)>& body);

}  // namespace oedflow
