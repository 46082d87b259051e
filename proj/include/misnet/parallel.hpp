#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace misnet {

inline unsigned default_threads() {
    return std::max(1u, std::thread::hardware_concurrency());
}

/// Runs fn(chunk_index, begin, end) over [0, n) split into at most `threads`
/// contiguous chunks. Chunk boundaries depend only on n and threads.
/// The first exception thrown by any chunk is rethrown after all joins.
template <typename Fn>
void parallel_chunks(std::size_t n, unsigned threads, Fn&& fn) {
    threads = std::max(1u, threads);
    const std::size_t chunks = std::min<std::size_t>(threads, std::max<std::size_t>(n, 1));
    if (chunks <= 1) {
        fn(std::size_t{0}, std::size_t{0}, n);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(chunks);
    std::exception_ptr failure;
    std::mutex failure_mutex;
    for (std::size_t c = 0; c < chunks; ++c) {
        const std::size_t begin = n * c / chunks;
        const std::size_t end = n * (c + 1) / chunks;
        pool.emplace_back([&, c, begin, end] {
            try {
                fn(c, begin, end);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
}

/// Number of chunks parallel_chunks will use for (n, threads).
inline std::size_t chunk_count(std::size_t n, unsigned threads) {
    return std::min<std::size_t>(std::max(1u, threads), std::max<std::size_t>(n, 1));
}

}  // namespace misnet

namespace misnet {

/// Runs fn(task) for every task in [0, tasks) on up to `threads` workers
/// pulling from a shared counter. Which worker runs a task is unspecified,
/// so fn must write only task-local state.
template <typename Fn>
void parallel_tasks(std::size_t tasks, unsigned threads, Fn&& fn) {
    threads = static_cast<unsigned>(std::min<std::size_t>(std::max(1u, threads), std::max<std::size_t>(tasks, 1)));
    if (threads <= 1) {
        for (std::size_t t = 0; t < tasks; ++t) fn(t);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned w = 0; w < threads; ++w) {
        pool.emplace_back([&] {
            for (std::size_t t = next++; t < tasks; t = next++) {
                try {
                    fn(t);
                } catch (...) {
                    std::lock_guard lock(failure_mutex);
                    if (!failure) failure = std::current_exception();
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
}

}  // namespace misnet
