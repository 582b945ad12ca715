#pragma once

#include <cstddef>
#include <functional>

namespace lwr {

/// Worker count used by parallel_for: the SIM_THREADS environment variable
/// when set (minimum 1), otherwise hardware concurrency.
unsigned worker_count();

/// Runs fn(i) for i in [0, n). Iterations must write disjoint state; under
/// that contract results do not depend on the worker count.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace lwr
