#pragma once

#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace bunkbed {

inline int resolve_threads(int requested) {
    if (requested > 0) return requested;
    unsigned hc = std::thread::hardware_concurrency();
    return hc > 0 ? static_cast<int>(hc) : 1;
}

// Runs fn(worker, lo, hi) over a static partition of [0, total) into
// contiguous chunks, one per worker. Static chunking plus associative merges
// on the caller side keeps results independent of the worker count.
template <typename Fn>
void parallel_chunks(std::uint64_t total, int threads, Fn&& fn) {
    int workers = resolve_threads(threads);
    if (static_cast<std::uint64_t>(workers) > total) workers = total > 0 ? static_cast<int>(total) : 1;
    if (workers <= 1) {
        fn(0, std::uint64_t{0}, total);
        return;
    }

    std::exception_ptr first_error;
    std::mutex error_mutex;
    auto guarded = [&](int worker, std::uint64_t lo, std::uint64_t hi) {
        try {
            fn(worker, lo, hi);
        } catch (...) {
            std::lock_guard<std::mutex> lock(error_mutex);
            if (!first_error) first_error = std::current_exception();
        }
    };

    std::vector<std::thread> pool;
    pool.reserve(workers - 1);
    for (int w = 1; w < workers; ++w) {
        std::uint64_t lo = total * w / workers;
        std::uint64_t hi = total * (w + 1) / workers;
        pool.emplace_back(guarded, w, lo, hi);
    }
    guarded(0, 0, total / workers);
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

}  // namespace bunkbed
