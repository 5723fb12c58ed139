#pragma once

#include <cstddef>
#include <functional>

namespace tms {

/// Number of worker threads used by data-parallel passes (>= 1).
int worker_count();

/// Sets the worker count; 0 selects std::thread::hardware_concurrency().
void set_worker_count(int workers);

/// Runs body(begin, end) over [0, n) split into contiguous ranges, one per
/// worker. Results must not depend on the split: bodies write disjoint
/// outputs. The first exception (lowest range) is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace tms
