#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace dirimor {

/**
 * \brief Runs body(i) for i in [0, n) on up to `workers` threads.
 *
 * Each index writes only its own output slot, so results do not depend on
 * the worker count. The first exception thrown by any index is rethrown.
 */
template <class Body>
void parallel_for(std::size_t n, int workers, const Body& body) {
    const std::size_t w = std::min<std::size_t>(n, static_cast<std::size_t>(std::max(1, workers)));
    if (w <= 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr err;
    std::mutex err_mtx;
    auto run = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= n) return;
            try {
                body(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(err_mtx);
                if (!err) err = std::current_exception();
                next.store(n);
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    for (std::size_t t = 1; t < w; ++t) pool.emplace_back(run);
    run();
    for (auto& th : pool) th.join();
    if (err) std::rethrow_exception(err);
}

}  // namespace dirimor
