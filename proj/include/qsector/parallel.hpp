#pragma once

#include <cstddef>
#include <functional>

namespace qsector {

/// Worker count from QSECTOR_THREADS, else the hardware concurrency. Never affects results.
unsigned worker_count();

/// Runs body(i) for i in [0, n). Indices are split into contiguous blocks; every
/// result must be written to a per-index slot so the outcome is order-independent.
/// Nested calls run serially on the calling thread.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace qsector
