#pragma once

#include <cstddef>
#include <functional>

namespace modlab {

/// Worker count: MODLAB_THREADS when set to a positive integer, otherwise
/// the hardware concurrency.
std::size_t worker_count();

/// Calls body(i) for i in [0, count) on up to `workers` threads. Each index
/// runs exactly once; the first exception thrown is rethrown after all
/// workers finish.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body, std::size_t workers = worker_count());

}  // namespace modlab
