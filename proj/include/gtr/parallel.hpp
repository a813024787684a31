#pragma once

#include <atomic>
#include <cstddef>
#include <thread>
#include <vector>

namespace gtr {

/// Run fn(i) for i in [0, count) on `workers` threads. Item order within a
/// worker is unspecified, so fn must write only to its own slot; results are
/// then identical for any worker count. Work is handed out through an atomic
/// counter, which keeps wildly uneven item costs balanced.
template <typename Fn>
void parallel_for_index(std::size_t count, unsigned workers, Fn&& fn) {
    if (workers <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    auto body = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1, std::memory_order_relaxed);
            if (i >= count) return;
            fn(i);
        }
    };
    std::vector<std::thread> pool;
    const unsigned nthreads = std::min<std::size_t>(workers, count);
    pool.reserve(nthreads);
    for (unsigned t = 0; t < nthreads; ++t) pool.emplace_back(body);
    for (auto& th : pool) th.join();
}

}  // namespace gtr
