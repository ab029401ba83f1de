#pragma once

// Minimal index-range parallelism. ATTOCELL_THREADS caps the worker count;
// 0 or unset means one worker per hardware thread. Results must not depend
// on the worker count, so callers combine per-index outputs in index order.

#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace attocell {

inline int thread_count() {
    if (const char* env = std::getenv("ATTOCELL_THREADS")) {
        const int n = std::atoi(env);
        if (n > 0) return n;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

/// Runs fn(i) for i in [0, count) on up to thread_count() workers.
template <typename Fn>
void parallel_for(int count, Fn&& fn) {
    const int workers = std::min(thread_count(), count);
    if (workers <= 1) {
        for (int i = 0; i < count; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    std::atomic<int> next{0};
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) fn(i);
        });
    }
    for (auto& t : pool) t.join();
}

} // namespace attocell
