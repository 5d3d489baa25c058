#pragma once

#include <algorithm>
#include <cstdlib>
#include <thread>
#include <vector>

namespace polaris {

/// Worker count from POLARIS_THREADS (default 1). Parallel sections only
/// ever share immutable inputs and write disjoint output slots.
inline int worker_count() {
    const char* env = std::getenv("POLARIS_THREADS");
    if (!env) return 1;
    int n = std::atoi(env);
    return n < 1 ? 1 : n;
}

template <class F>
void parallel_for(int begin, int end, F&& body) {
    const int w = worker_count();
    const int span = end - begin;
    if (w <= 1 || span < 2 * w) {
        for (int i = begin; i < end; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(w);
    const int chunk = (span + w - 1) / w;
    for (int t = 0; t < w; ++t) {
        int lo = begin + t * chunk;
        int hi = std::min(end, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([lo, hi, &body] {
            for (int i = lo; i < hi; ++i) body(i);
        });
    }
    for (auto& th : pool) th.join();
}

} // namespace polaris
