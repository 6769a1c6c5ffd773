#pragma once

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace snlab {

/// Worker cap: SNLAB_THREADS if set, else hardware concurrency.
inline int max_threads() {
    if (const char* env = std::getenv("SNLAB_THREADS")) {
        int v = std::atoi(env);
        if (v >= 1) return v;
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

/// Static block partition of [0,n) over worker threads. Each index is
/// processed exactly once; fn must only write to per-index slots (or
/// reduce associatively), so the result is schedule-independent.
inline void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& block_fn) {
    int nt = std::min<std::size_t>(static_cast<std::size_t>(max_threads()), n == 0 ? 1 : n);
    if (nt <= 1 || n < 2) {
        block_fn(0, n);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(nt);
    std::size_t chunk = (n + nt - 1) / nt;
    for (int k = 0; k < nt; ++k) {
        std::size_t lo = static_cast<std::size_t>(k) * chunk;
        std::size_t hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back(block_fn, lo, hi);
    }
    for (auto& th : pool) th.join();
}

} // namespace snlab
