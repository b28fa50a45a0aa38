#pragma once

#include <cstddef>
#include <functional>

namespace trsc {

/// Worker cap: TRSC_THREADS when set to a positive integer, otherwise the
/// hardware concurrency (at least 1).
unsigned max_threads();

/// Runs body(i) for i in [0, count) on up to max_threads() workers. Each
/// index runs exactly once; the first exception thrown is rethrown after all
/// workers join.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

} // namespace trsc
