#pragma once

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace fanoguide {

/// Number of worker threads: hardware concurrency capped by FANOGUIDE_THREADS.
inline int worker_count(int jobs) {
    int n = static_cast<int>(std::thread::hardware_concurrency());
    if (n < 1) n = 1;
    if (const char* cap = std::getenv("FANOGUIDE_THREADS")) {
        const int c = std::atoi(cap);
        if (c >= 1) n = std::min(n, c);
    }
    return std::max(1, std::min(n, jobs));
}

/// Run fn(i) for i in [0, n); results must be written into per-index slots so
/// that the merge is deterministic.
inline void parallel_for(int n, const std::function<void(int)>& fn) {
    const int workers = worker_count(n);
    if (workers <= 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w)
        pool.emplace_back([&, w] {
            for (int i = w; i < n; i += workers) fn(i);
        });
    for (auto& t : pool) t.join();
}

} // namespace fanoguide
