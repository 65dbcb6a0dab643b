#pragma once

#include <cstddef>
#include <functional>

namespace hyperlac {

/// Worker count from HYPERLAC_THREADS (default 1, clamped to [1, 64]).
int thread_count();

/// Runs body(i) for i in [0, count). Each index writes only to its own output slot, so
/// results do not depend on how indices are distributed over threads.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace hyperlac
