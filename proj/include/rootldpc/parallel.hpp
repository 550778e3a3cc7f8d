#pragma once

#include <atomic>
#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace rootldpc {

inline unsigned default_workers() {
    if (const char* env = std::getenv("ROOTLDPC_WORKERS")) {
        int n = std::atoi(env);
        if (n > 0) return static_cast<unsigned>(n);
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw ? hw : 1;
}

/// Runs fn(chunk_begin, chunk_end, worker_id) over [0, n) in chunks claimed
/// from a shared counter. fn must be safe to call concurrently.
inline void parallel_chunks(std::size_t n, std::size_t chunk,
                            unsigned workers,
                            const std::function<void(std::size_t, std::size_t, unsigned)>& fn) {
    if (workers <= 1 || n <= chunk) {
        for (std::size_t b = 0; b < n; b += chunk) fn(b, std::min(n, b + chunk), 0);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            for (;;) {
                std::size_t b = next.fetch_add(chunk);
                if (b >= n) break;
                fn(b, std::min(n, b + chunk), w);
            }
        });
    }
    for (auto& t : pool) t.join();
}

} // namespace rootldpc
