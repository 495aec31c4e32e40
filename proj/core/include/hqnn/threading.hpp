#pragma once

#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace hqnn {

// Worker cap: HQNN_THREADS if set, otherwise hardware concurrency.
inline unsigned worker_count() {
    if (const char* env = std::getenv("HQNN_THREADS")) {
        long v = std::strtol(env, nullptr, 10);
        if (v >= 1) return static_cast<unsigned>(v);
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw ? hw : 1;
}

// Runs fn(i) for i in [0, n). Each index is processed exactly once; callers
// must write results into per-index slots so the outcome is order-independent.
inline void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
    unsigned workers = std::min<std::size_t>(worker_count(), n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> threads;
    threads.reserve(workers);
    for (unsigned t = 0; t < workers; ++t)
        threads.emplace_back([&, t] {
            for (std::size_t i = t; i < n; i += workers) fn(i);
        });
    for (std::thread& th : threads) th.join();
}

}  // namespace hqnn
