#pragma once

#include <cstddef>
#include <functional>

namespace stride {

/// Number of worker threads to use when a config asks for "auto" (0).
unsigned resolve_workers(unsigned requested);

/// Runs fn(i) for every i in [0, count) on up to `workers` threads.
///
/// Work items are claimed in index order; results must be written to
/// per-index slots by the caller so output never depends on scheduling.
/// The first exception thrown by any item is rethrown after all threads join.
void parallel_for(std::size_t count, unsigned workers, const std::function<void(std::size_t)>& fn);

}  // namespace stride
