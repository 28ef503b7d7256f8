#pragma once

#include <cstddef>
#include <functional>

namespace superliouville {

/// Forces single-threaded execution everywhere (the CLI's --serial flag).
void set_serial(bool serial);
bool serial_mode();

/// Worker count: hardware concurrency, capped by SUPERLIOUVILLE_THREADS, or 1
/// in serial mode.
unsigned worker_count();

/// Runs body(begin, end) over contiguous chunks of [0, n) on worker threads.
/// Every index is handled by exactly one call, so writes to disjoint outputs
/// give identical results regardless of the thread count.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace superliouville
