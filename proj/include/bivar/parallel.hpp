#pragma once

#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace bivar {

// run fn(0..n-1) across a small pool; per-index work must be pure and write
// only to caller-owned slots, so results are identical for any thread count
template <class Fn>
void parallel_replicates(std::size_t n, std::size_t threads, Fn&& fn) {
    threads = std::max<std::size_t>(1, std::min(threads, n));
    if (threads == 1) {
        for (std::size_t r = 0; r < n; ++r) fn(r);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr first_error;
    std::mutex err_mu;
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (std::size_t w = 0; w < threads; ++w)
        pool.emplace_back([&] {
            for (std::size_t r; (r = next.fetch_add(1)) < n;) {
                try {
                    fn(r);
                } catch (...) {
                    std::lock_guard<std::mutex> lk(err_mu);
                    if (!first_error) first_error = std::current_exception();
                    next.store(n);
                }
            }
        });
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
}

}  // namespace bivar
