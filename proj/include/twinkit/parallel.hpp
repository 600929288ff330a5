#pragma once

#include <cstddef>
#include <functional>

namespace twinkit {

/// Worker cap: TWINKIT_THREADS if set to a positive integer, else hardware concurrency.
std::size_t thread_count();

/// Calls body(i) for i in [0, n) over up to thread_count() workers in contiguous chunks.
/// Callers write per-index results, so outcomes never depend on the worker count.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace twinkit
