#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace geo {

/// Worker count: GEO_THREADS when set to a positive integer, otherwise the
/// hardware concurrency.
int thread_count();

/// Calls fn(i) for every i in [0, count). Work is split into contiguous
/// blocks; if any call throws, the exception of the smallest index is
/// rethrown after all workers finish.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn);

template <class T, class F>
std::vector<T> parallel_map(std::size_t count, F&& f) {
    std::vector<T> out(count);
    parallel_for(count, [&](std::size_t i) { out[i] = f(i); });
    return out;
}

}  // namespace geo
