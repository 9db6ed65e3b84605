#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace dominative {

// Worker count: DOMINATIVE_THREADS caps it, hardware concurrency otherwise.
inline int thread_budget() {
    if (const char* env = std::getenv("DOMINATIVE_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v >= 1) return static_cast<int>(v);
    }
    const unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : static_cast<int>(hc);
}

// Static partition of [0, count) into contiguous chunks, one per worker.
// Chunks write disjoint state, so results do not depend on scheduling.
inline void parallel_for_chunks(std::int64_t count,
                                const std::function<void(std::int64_t, std::int64_t)>& body) {
    const int workers = thread_budget();
    if (workers <= 1 || count < 2048) {
        body(0, count);
        return;
    }
    const std::int64_t chunk = (count + workers - 1) / workers;
    std::vector<std::jthread> pool;
    pool.reserve(static_cast<size_t>(workers) - 1);
    for (int w = 1; w < workers; ++w) {
        const std::int64_t b = w * chunk;
        const std::int64_t e = std::min<std::int64_t>(count, b + chunk);
        if (b >= e) break;
        pool.emplace_back([&body, b, e] { body(b, e); });
    }
    body(0, std::min<std::int64_t>(count, chunk));
}

} // namespace dominative
