/// @file parallel.hpp
/// @brief Deterministic fork-join helpers.
///
/// Parallel kernels in this project follow one pattern: each output element
/// (or each row partial) is computed by exactly one thread with a fixed inner
/// summation order, and partials are combined single-threaded in index order.
/// Results are therefore bit-identical for any thread count.
#pragma once

#include <cstddef>
#include <thread>
#include <vector>

namespace vortexlab {

inline unsigned resolve_threads(unsigned requested) {
    if (requested != 0) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1u : hw;
}

/// Runs body(begin, end) on disjoint contiguous ranges covering [0, n).
template <class Body>
void parallel_ranges(std::size_t n, unsigned threads, Body&& body) {
    threads = resolve_threads(threads);
    if (n == 0) return;
    if (threads <= 1 || n < 2 * threads) {
        body(std::size_t{0}, n);
        return;
    }
    const std::size_t chunk = (n + threads - 1) / threads;
    std::vector<std::thread> pool;
    pool.reserve(threads - 1);
    for (unsigned t = 1; t < threads; ++t) {
        const std::size_t b = t * chunk;
        if (b >= n) break;
        const std::size_t e = std::min(n, b + chunk);
        pool.emplace_back([&body, b, e] { body(b, e); });
    }
    body(std::size_t{0}, std::min(n, chunk));
    for (auto& th : pool) th.join();
}

} // namespace vortexlab
