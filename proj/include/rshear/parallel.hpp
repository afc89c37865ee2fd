#pragma once

#include <functional>

namespace rshear {

/// Set the worker count used by parallel_for (0 = hardware concurrency).
void set_threads(int n);
int get_threads();

/// Run fn(i) for i in [begin, end). Iterations are split into contiguous
/// chunks, one per worker; fn must be safe to call concurrently on disjoint
/// indices. With one worker this degenerates to a plain loop.
void parallel_for(int begin, int end, const std::function<void(int)>& fn);

} // namespace rshear
